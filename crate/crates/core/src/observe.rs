//! Observers recording scalar summaries of a field during [`crate::evolve`].

use serde::{Deserialize, Serialize};

use crate::lattice::SpinorField;
use crate::walk::Observer;

/// Norm, centroid and spread of the density at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MomentRecord {
    pub step: usize,
    pub norm: f64,
    pub mean: [f64; 2],
    pub sd: [f64; 2],
}

/// Density moments, using each site's periodic image nearest the origin.
#[derive(Debug, Clone, Default)]
pub struct Moments {
    positions: Vec<[f64; 2]>,
    pub records: Vec<MomentRecord>,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn series(&self, f: impl Fn(&MomentRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }
}

impl Observer for Moments {
    fn observe(&mut self, step: usize, field: &SpinorField) {
        let lat = field.lattice();
        if self.positions.len() != lat.len() {
            self.positions = lat.sites().map(|s| lat.centered_position(s)).collect();
        }
        let mut norm = 0.0;
        let mut m1 = [0.0; 2];
        let mut m2 = [0.0; 2];
        for (v, p) in field.amplitudes().iter().zip(&self.positions) {
            let rho = v[0].norm_sqr() + v[1].norm_sqr();
            norm += rho;
            for a in 0..2 {
                m1[a] += rho * p[a];
                m2[a] += rho * p[a] * p[a];
            }
        }
        let mean = if norm > 0.0 { [m1[0] / norm, m1[1] / norm] } else { [0.0; 2] };
        let sd = if norm > 0.0 {
            [0, 1].map(|a| (m2[a] / norm - mean[a] * mean[a]).max(0.0).sqrt())
        } else {
            [0.0; 2]
        };
        self.records.push(MomentRecord { step, norm, mean, sd });
    }
}

/// Density summed over y, binned in x columns ε/2 wide.
///
/// Bin `c` of a row holds `x = (c − n_x)·ε/2`, so bins run from `−Lx/2` upwards.
#[derive(Debug, Clone, Default)]
pub struct XProjection {
    bins: Vec<usize>,
    pub xs: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl XProjection {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Observer for XProjection {
    fn observe(&mut self, _step: usize, field: &SpinorField) {
        let lat = field.lattice();
        let width = lat.half_columns();
        if self.bins.len() != lat.len() {
            self.bins = lat
                .sites()
                .map(|s| (lat.half_column(s) + lat.n_x) % width)
                .collect();
            self.xs = (0..width)
                .map(|c| (c as f64 - lat.n_x as f64) * 0.5 * lat.epsilon)
                .collect();
        }
        let mut row = vec![0.0; width];
        for (v, &b) in field.amplitudes().iter().zip(&self.bins) {
            row[b] += v[0].norm_sqr() + v[1].norm_sqr();
        }
        self.rows.push(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::C64;
    use crate::lattice::{LatticeFamily, LatticeSpec, SiteIndex};

    #[test]
    fn moments_of_two_point_density() {
        let l = LatticeSpec::new(LatticeFamily::EquilateralTriangle, 8, 8, 1.0).unwrap();
        let mut f = SpinorField::zeros(l);
        let h = 0.5f64.sqrt();
        f.set(SiteIndex::new(1, 0), [C64::new(h, 0.0), C64::new(0.0, 0.0)]);
        f.set(SiteIndex::new(-1, 0), [C64::new(0.0, 0.0), C64::new(0.0, h)]);
        let mut m = Moments::new();
        m.observe(0, &f);
        let r = m.records[0];
        assert!((r.norm - 1.0).abs() < 1e-15);
        assert!(r.mean[0].abs() < 1e-15 && (r.sd[0] - 1.0).abs() < 1e-12 && r.sd[1] == 0.0);
    }

    #[test]
    fn projection_bins_follow_x() {
        let l = LatticeSpec::new(LatticeFamily::EquilateralTriangle, 6, 4, 1.0).unwrap();
        let f = SpinorField::localized(l, SiteIndex::new(0, 1), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let mut p = XProjection::new();
        p.observe(0, &f);
        assert_eq!(p.rows[0].len(), 12);
        let hit = p.rows[0].iter().position(|&v| v > 0.0).unwrap();
        assert_eq!(p.xs[hit], 0.5);
        assert_eq!(p.xs[0], -3.0);
    }
}
