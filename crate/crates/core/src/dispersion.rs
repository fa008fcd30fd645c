//! Momentum-space walk matrices, eigenphase branches and gap searches.
//!
//! Wave vectors are expressed in the zone chart, in which the zone is
//! `[−π, π] × [−π/√3, π/√3]`. For the equilateral and honeycomb lattices the
//! chart is the physical frame. The isosceles lattice is mapped onto the
//! equilateral one by `y ↦ √3 y`, so its chart `k_y` is the physical one
//! divided by √3.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::{Mat2, C64};
use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::walk::{build_walk, WalkKind, WalkSpec};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Half-height of the zone, `π/√3`.
pub const KY_MAX: f64 = PI / SQRT3;

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
}

impl WaveVector {
    pub const fn new(kx: f64, ky: f64) -> Self {
        Self { kx, ky }
    }

    /// Representative in `(−π, π] × (−π/√3, π/√3]`.
    pub fn canonical(self) -> Self {
        Self {
            kx: wrap_half_open(self.kx, PI),
            ky: wrap_half_open(self.ky, KY_MAX),
        }
    }

    pub fn distance(self, other: WaveVector) -> f64 {
        (self.kx - other.kx).hypot(self.ky - other.ky)
    }
}

impl std::ops::Neg for WaveVector {
    type Output = WaveVector;

    fn neg(self) -> WaveVector {
        WaveVector::new(-self.kx, -self.ky)
    }
}

fn wrap_half_open(v: f64, half: f64) -> f64 {
    let w = (v + half).rem_euclid(2.0 * half) - half;
    if w <= -half {
        w + 2.0 * half
    } else {
        w
    }
}

/// Chart wave vector to physical components.
pub fn chart_to_physical(kind: WalkKind, k: WaveVector) -> [f64; 2] {
    match kind {
        WalkKind::ThreeStepIsosceles => [k.kx, SQRT3 * k.ky],
        _ => [k.kx, k.ky],
    }
}

/// Physical wave vector to chart components.
pub fn physical_to_chart(kind: WalkKind, k: [f64; 2]) -> WaveVector {
    match kind {
        WalkKind::ThreeStepIsosceles => WaveVector::new(k[0], k[1] / SQRT3),
        _ => WaveVector::new(k[0], k[1]),
    }
}

/// Walk built with a tabulated mass.
///
/// For the two equilateral walks the tabulated `m` enters the mass coin as
/// the angle `−m·Δt`; for the isosceles walk it enters as `+m·ε`.
pub fn table_walk(kind: WalkKind, m: f64) -> Result<WalkSpec> {
    let sign = match kind {
        WalkKind::SixStepEquilateral | WalkKind::ThreeStepEquilateral => -1.0,
        _ => 1.0,
    };
    build_walk(kind, sign * m, 1.0)
}

/// `W(k)` for a chart wave vector.
pub fn walk_matrix(walk: &WalkSpec, k: WaveVector) -> Result<Mat2> {
    walk_matrix_physical(walk, chart_to_physical(walk.kind, k))
}

/// `W(k)` for a physical wave vector: each shift becomes `diag(e^{−ik·v_L}, e^{−ik·v_R})`.
pub fn walk_matrix_physical(walk: &WalkSpec, k: [f64; 2]) -> Result<Mat2> {
    let family: LatticeFamily = walk.family();
    let mut w = Mat2::IDENTITY;
    for s in &walk.substeps {
        let phase = |dir| -> Result<C64> {
            let [vx, vy] = family.offset(dir)?;
            Ok(C64::from_polar(1.0, -walk.epsilon * (k[0] * vx + k[1] * vy)))
        };
        let shift = Mat2::diag(phase(s.shift.left_dir)?, phase(s.shift.right_dir)?);
        let mut m = s.coin.matrix() * shift;
        if let Some(r) = s.pre_rotation {
            m = m * r.matrix();
        }
        if let Some(r) = s.post_rotation {
            m = r.matrix() * m;
        }
        w = m * w;
    }
    if let Some(c) = walk.mass_coin {
        w = c.matrix() * w;
    }
    Ok(w)
}

/// Eigenphase `ω ∈ [0, π]` of a matrix in SU(2), without the precision loss of `acos` near 0 and π.
fn su2_phase(w: &Mat2) -> f64 {
    let [a, b, c, d] = w.0;
    let s = (0.25 * (a - d).norm_sqr() + 0.5 * (b.norm_sqr() + c.norm_sqr())).sqrt();
    s.atan2(0.5 * (a + d).re)
}

/// Branches `(ω₊, ω₋)` of a unitary 2x2 matrix.
pub fn eigenphases(w: &Mat2, k: WaveVector) -> Result<(f64, f64)> {
    let defect = w.unitarity_defect();
    if defect.is_nan() || defect >= UNITARY_TOL {
        return Err(Error::NonUnitary {
            kx: k.kx,
            ky: k.ky,
            detail: format!("|W†W − 1| = {defect:e}"),
        });
    }
    let det = w.det();
    if (det - C64::new(1.0, 0.0)).norm() < UNITARY_TOL && w.trace().im.abs() < UNITARY_TOL {
        let omega = su2_phase(w);
        return Ok((omega, -omega));
    }
    let phi = 0.5 * det.arg();
    let v = w.scale(C64::from_polar(1.0, -phi));
    let omega = su2_phase(&v);
    Ok((wrap_half_open(phi + omega, PI), wrap_half_open(phi - omega, PI)))
}

pub fn dispersion_at(walk: &WalkSpec, k: WaveVector) -> Result<(f64, f64)> {
    eigenphases(&walk_matrix(walk, k)?, k)
}

/// `|ω(k)|` for a physical wave vector.
pub fn omega_physical(walk: &WalkSpec, k: [f64; 2]) -> Result<f64> {
    let w = walk_matrix_physical(walk, k)?;
    Ok(eigenphases(&w, WaveVector::new(k[0], k[1]))?.0.abs())
}

/// Eigenvectors of `W(k)`, paired with their eigenphases `ω₊`, `ω₋`.
pub fn polarization(walk: &WalkSpec, k: WaveVector) -> Result<[(f64, [C64; 2]); 2]> {
    let w = walk_matrix(walk, k)?;
    let (wp, wm) = eigenphases(&w, k)?;
    let [a, b, c, d] = w.0;
    let vector = |omega: f64, other: f64| {
        let lambda = C64::from_polar(1.0, omega);
        let u = [b, lambda - a];
        let v = [lambda - d, c];
        let norm = |x: &[C64; 2]| (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
        let (best, n) = if norm(&u) >= norm(&v) { (u, norm(&u)) } else { (v, norm(&v)) };
        if n < 1e-12 {
            // W is a multiple of the identity
            let e = if omega >= other { [1.0, 0.0] } else { [0.0, 1.0] };
            return [C64::new(e[0], 0.0), C64::new(e[1], 0.0)];
        }
        [best[0] / n, best[1] / n]
    };
    Ok([(wp, vector(wp, wm)), (wm, vector(wm, wp))])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionResult {
    pub nx: usize,
    pub ny: usize,
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    /// Row-major, `ky` outer.
    pub omega_plus: Vec<f64>,
    pub omega_minus: Vec<f64>,
}

impl DispersionResult {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn k(&self, idx: usize) -> WaveVector {
        WaveVector::new(self.kx[idx % self.nx], self.ky[idx / self.nx])
    }

    /// Index of the smallest `|ω|` (first in storage order on ties).
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.omega_plus.iter().enumerate() {
            if w.abs() < self.omega_plus[best].abs() {
                best = i;
            }
        }
        best
    }
}

/// `n` points from `−half` to `half` inclusive, symmetric about 0 bit for bit.
pub fn symmetric_axis(n: usize, half: f64) -> Vec<f64> {
    let d = (n - 1) as f64;
    (0..n).map(|i| half * ((2 * i) as f64 - d) / d).collect()
}

/// `n` points from `−half` (included) to `half` (excluded); even `n` samples 0 exactly.
pub fn periodic_axis(n: usize, half: f64) -> Vec<f64> {
    (0..n).map(|i| half * ((2 * i) as f64 - n as f64) / n as f64).collect()
}

/// Eigenphases on a periodic `nx × ny` grid over the zone.
pub fn scan_bz(walk: &WalkSpec, nx: usize, ny: usize) -> Result<DispersionResult> {
    check_grid(nx, ny)?;
    scan_axes(walk, periodic_axis(nx, PI), periodic_axis(ny, KY_MAX))
}

fn check_grid(nx: usize, ny: usize) -> Result<()> {
    if nx < 8 || ny < 8 {
        return Err(Error::InvalidArgument(format!("grid must be at least 8x8, got {nx}x{ny}")));
    }
    Ok(())
}

fn scan_axes(walk: &WalkSpec, kx: Vec<f64>, ky: Vec<f64>) -> Result<DispersionResult> {
    let (nx, ny) = (kx.len(), ky.len());
    let pairs = (0..nx * ny)
        .into_par_iter()
        .map(|idx| dispersion_at(walk, WaveVector::new(kx[idx % nx], ky[idx / nx])))
        .collect::<Result<Vec<_>>>()?;
    let (omega_plus, omega_minus) = pairs.into_iter().unzip();
    Ok(DispersionResult {
        nx,
        ny,
        kx,
        ky,
        omega_plus,
        omega_minus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreeAxis {
    Kx,
    Ky,
}

/// A zone edge along which ω is constant and minimal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateLine {
    /// Coordinate that varies along the line.
    pub free: FreeAxis,
    /// Value of the fixed coordinate.
    pub fixed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub omega_min: f64,
    pub gap: f64,
    /// Isolated minimizers, sorted by `(kx, ky)`; points on a degenerate line are not repeated here.
    pub minimizers: Vec<WaveVector>,
    pub degenerate_lines: Vec<DegenerateLine>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapOptions {
    pub grid: usize,
    /// Grid minima within this distance of the best grid value are refined,
    /// widened to the largest change of ω between neighbouring grid points.
    pub candidate_window: f64,
    pub final_step: f64,
    pub zero_threshold: f64,
    /// Refined points within this of the minimum count as minimizers.
    pub value_tolerance: f64,
    pub cluster_radius: f64,
    pub line_tolerance: f64,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self {
            grid: 512,
            candidate_window: 1e-2,
            final_step: 1e-8,
            zero_threshold: 1e-9,
            value_tolerance: 1e-8,
            cluster_radius: 1e-4,
            line_tolerance: 1e-9,
        }
    }
}

pub fn min_gap(walk: &WalkSpec) -> Result<GapReport> {
    min_gap_with(walk, &GapOptions::default())
}

pub fn min_gap_with(walk: &WalkSpec, opts: &GapOptions) -> Result<GapReport> {
    let n = opts.grid;
    check_grid(n, n)?;
    let scan = scan_axes(walk, symmetric_axis(n, PI), symmetric_axis(n, KY_MAX))?;
    let w = &scan.omega_plus;
    let grid_min = w.iter().copied().fold(f64::INFINITY, f64::min);

    let mut lines = Vec::new();
    let edges = [
        (FreeAxis::Ky, PI, (0..n).map(|j| scan.index(n - 1, j)).collect::<Vec<_>>()),
        (FreeAxis::Ky, -PI, (0..n).map(|j| scan.index(0, j)).collect()),
        (FreeAxis::Kx, KY_MAX, (0..n).map(|i| scan.index(i, n - 1)).collect()),
        (FreeAxis::Kx, -KY_MAX, (0..n).map(|i| scan.index(i, 0)).collect()),
    ];
    for (free, fixed, idx) in &edges {
        let lo = idx.iter().map(|&i| w[i]).fold(f64::INFINITY, f64::min);
        let hi = idx.iter().map(|&i| w[i]).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < opts.line_tolerance && lo - grid_min < opts.line_tolerance {
            lines.push(DegenerateLine {
                free: *free,
                fixed: *fixed,
            });
        }
    }
    let on_line = |k: WaveVector| {
        lines.iter().any(|l| match l.free {
            FreeAxis::Ky => (k.kx - l.fixed).abs() < opts.cluster_radius,
            FreeAxis::Kx => (k.ky - l.fixed).abs() < opts.cluster_radius,
        })
    };

    let h0 = 2.0 * PI / (n - 1) as f64;
    // |∇ω| is bounded by the total hop length of one step
    let lipschitz = 2.0 * walk.substeps.len() as f64 * walk.epsilon;
    let window = opts.candidate_window.max(lipschitz * h0);
    let candidates: Vec<usize> = (0..n * n)
        .filter(|&idx| w[idx] <= grid_min + window && is_local_min(&scan, idx))
        .filter(|&idx| !on_line(scan.k(idx)))
        .collect();
    let refined = candidates
        .par_iter()
        .map(|&idx| refine(walk, scan.k(idx), w[idx], h0, opts))
        .collect::<Result<Vec<_>>>()?;

    let line_min = if lines.is_empty() { f64::INFINITY } else { grid_min };
    let best = refined.iter().map(|r| r.1).fold(line_min, f64::min);
    let omega_min = best;
    let mut pts: Vec<(WaveVector, f64)> = refined
        .into_iter()
        .filter(|&(_, v)| v <= best + opts.value_tolerance)
        .collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut clusters: Vec<WaveVector> = Vec::new();
    for (k, _) in pts {
        if !clusters.iter().any(|c| c.distance(k) < opts.cluster_radius) && !on_line(k) {
            clusters.push(k);
        }
    }
    clusters.sort_by(|a, b| a.kx.total_cmp(&b.kx).then(a.ky.total_cmp(&b.ky)));
    Ok(GapReport {
        omega_min,
        gap: 2.0 * omega_min,
        minimizers: clusters,
        degenerate_lines: lines,
    })
}

fn is_local_min(scan: &DispersionResult, idx: usize) -> bool {
    let (i, j) = ((idx % scan.nx) as isize, (idx / scan.nx) as isize);
    let v = scan.omega_plus[idx];
    for dj in -1..=1 {
        for di in -1..=1 {
            let (a, b) = (i + di, j + dj);
            if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= scan.nx as isize || b >= scan.ny as isize {
                continue;
            }
            if scan.omega_plus[scan.index(a as usize, b as usize)] < v {
                return false;
            }
        }
    }
    true
}

/// Pattern search over eight directions with a halving step, clamped to the zone.
fn refine(walk: &WalkSpec, start: WaveVector, value: f64, h0: f64, opts: &GapOptions) -> Result<(WaveVector, f64)> {
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ];
    let eval = |k: WaveVector| dispersion_at(walk, k).map(|p| p.0);
    let (mut k, mut v) = (start, value);
    let mut h = h0;
    while h >= opts.final_step && v >= opts.zero_threshold {
        let mut moved = false;
        for (dx, dy) in DIRS {
            let trial = WaveVector::new(
                (k.kx + dx * h).clamp(-PI, PI),
                (k.ky + dy * h).clamp(-KY_MAX, KY_MAX),
            );
            if trial == k {
                continue;
            }
            let tv = eval(trial)?;
            if tv < v {
                k = trial;
                v = tv;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    Ok((k, v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub radius: f64,
    /// `(direction angle, ω/|k|)` per sampled direction.
    pub slopes: Vec<(f64, f64)>,
    pub mean_slope: f64,
    /// `max |s − s̄| / s̄`.
    pub anisotropy: f64,
}

/// Samples `ω(k)/|k|` on a ring of physical radius `radius` around `k = 0`.
pub fn cone_slope_check(walk: &WalkSpec, radius: f64, directions: usize) -> Result<ConeReport> {
    if walk.mass_angle() != 0.0 {
        return Err(Error::InvalidArgument("cone check needs a massless walk".into()));
    }
    if !(radius > 0.0 && radius <= 0.5) || directions < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < radius <= 0.5 and at least 2 directions, got {radius} and {directions}"
        )));
    }
    let slopes = (0..directions)
        .map(|d| {
            let phi = 2.0 * PI * d as f64 / directions as f64;
            let k = [radius * phi.cos(), radius * phi.sin()];
            Ok((phi, omega_physical(walk, k)? / radius))
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = slopes.iter().map(|s| s.1).sum::<f64>() / directions as f64;
    let anisotropy = slopes.iter().map(|s| (s.1 - mean).abs() / mean).fold(0.0, f64::max);
    Ok(ConeReport {
        radius,
        slopes,
        mean_slope: mean,
        anisotropy,
    })
}
