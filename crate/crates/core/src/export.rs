//! Text and raster output formats.

use std::io::{self, Write};

use crate::dispersion::{DispersionResult, FreeAxis, GapReport};

/// `v` with 9 significant digits, formatted like C's `%.9g`.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header `kx,ky,omega_minus`, one row per grid point in storage order.
pub fn write_contour_csv(mut w: impl Write, scan: &DispersionResult) -> io::Result<()> {
    writeln!(w, "kx,ky,omega_minus")?;
    for (idx, om) in scan.omega_minus.iter().enumerate() {
        let k = scan.k(idx);
        writeln!(w, "{},{},{}", sig9(k.kx), sig9(k.ky), sig9(*om))?;
    }
    Ok(())
}

/// Header `t,x,rho`; `rows[t][c]` is the density in column `xs[c]` after `t` steps.
pub fn write_density_csv(mut w: impl Write, xs: &[f64], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(w, "t,x,rho")?;
    for (t, row) in rows.iter().enumerate() {
        for (x, rho) in xs.iter().zip(row) {
            writeln!(w, "{t},{},{}", sig9(*x), sig9(*rho))?;
        }
    }
    Ok(())
}

/// Binary 16-bit PGM, row 0 first, intensities scaled linearly to the global maximum.
pub fn write_pgm16(mut w: impl Write, width: usize, rows: &[Vec<f64>]) -> io::Result<()> {
    if rows.iter().any(|r| r.len() != width) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "ragged raster rows"));
    }
    let max = rows.iter().flatten().copied().fold(0.0, f64::max);
    write!(w, "P5\n{width} {}\n65535\n", rows.len())?;
    let mut buf = Vec::with_capacity(2 * width * rows.len());
    for v in rows.iter().flatten() {
        let level = if max > 0.0 { (v / max * 65535.0).round().clamp(0.0, 65535.0) as u16 } else { 0 };
        buf.extend_from_slice(&level.to_be_bytes());
    }
    w.write_all(&buf)
}

/// Sums adjacent pairs of half-columns into `len/2` full columns.
pub fn merge_half_columns(row: &[f64]) -> Vec<f64> {
    row.chunks(2).map(|c| c.iter().sum()).collect()
}

/// Header `m,omega_min,gap,kx,ky`, one row per minimizer; a degenerate line writes `free` for its free coordinate.
pub fn write_zitter_csv(mut w: impl Write, rows: &[(f64, GapReport)]) -> io::Result<()> {
    writeln!(w, "m,omega_min,gap,kx,ky")?;
    for (m, r) in rows {
        let head = format!("{},{},{}", sig9(*m), sig9(r.omega_min), sig9(r.gap));
        for k in &r.minimizers {
            writeln!(w, "{head},{},{}", sig9(k.kx), sig9(k.ky))?;
        }
        for l in &r.degenerate_lines {
            match l.free {
                FreeAxis::Ky => writeln!(w, "{head},{},free", sig9(l.fixed))?,
                FreeAxis::Kx => writeln!(w, "{head},free,{}", sig9(l.fixed))?,
            }
        }
    }
    Ok(())
}
