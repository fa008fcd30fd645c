//! Lattice geometries, the integer site chart and spinor-field storage.
//!
//! Sites are indexed by integer coefficients `(a, b)` of two generating
//! vectors `g1 = (ε, 0)` and `g2`, which depends on the family. The torus is
//! rectangular: `(a, b + n_y)` is identified with `(a + n_y·g2ₓ/ε, b)`, so the
//! periodic cell is `[0, n_x ε) × [0, n_y g2ᵧ)` and the x coordinate of a site
//! is well defined modulo `n_x ε`. This requires `n_y` to be even.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coin::C64;
use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeFamily {
    /// Equilateral triangles of side ε, six neighbours.
    EquilateralTriangle,
    /// Isosceles triangles of base ε and height ε/2, six neighbours.
    IsoscelesTriangle,
    /// Hexagonal honeycomb of side ε, three outgoing directions.
    Honeycomb,
}

impl LatticeFamily {
    pub fn direction_count(self) -> u8 {
        match self {
            LatticeFamily::Honeycomb => 3,
            _ => 6,
        }
    }

    /// Generating vectors in units of ε.
    pub fn generators(self) -> [[f64; 2]; 2] {
        match self {
            LatticeFamily::EquilateralTriangle => [[1.0, 0.0], [0.5, 0.5 * SQRT3]],
            LatticeFamily::IsoscelesTriangle => [[1.0, 0.0], [0.5, 0.5]],
            LatticeFamily::Honeycomb => [[1.0, 0.0], [-0.5, 0.5 * SQRT3]],
        }
    }

    /// Integer chart offset `(da, db)` of direction `dir`.
    pub fn index_offset(self, dir: u8) -> Result<(i64, i64)> {
        let off = match (self, dir) {
            (LatticeFamily::Honeycomb, 1) => (1, 0),
            (LatticeFamily::Honeycomb, 2) => (0, 1),
            (LatticeFamily::Honeycomb, 3) => (-1, -1),
            (LatticeFamily::Honeycomb, _) => return Err(Error::Direction { family: self, dir }),
            (_, 1) => (1, 0),
            (_, 2) => (0, 1),
            (_, 3) => (-1, 1),
            (_, 4) => (-1, 0),
            (_, 5) => (0, -1),
            (_, 6) => (1, -1),
            _ => return Err(Error::Direction { family: self, dir }),
        };
        Ok(off)
    }

    /// Position offset of direction `dir`, in units of ε.
    pub fn offset(self, dir: u8) -> Result<[f64; 2]> {
        let (da, db) = self.index_offset(dir)?;
        Ok(self.chart_to_plane(da as f64, db as f64))
    }

    pub fn chart_to_plane(self, a: f64, b: f64) -> [f64; 2] {
        let [g1, g2] = self.generators();
        [a * g1[0] + b * g2[0], a * g1[1] + b * g2[1]]
    }

    /// Direction opposite to `dir` on the triangular families (`j + 3 mod 6`).
    pub fn opposite(self, dir: u8) -> Result<u8> {
        if self == LatticeFamily::Honeycomb || !(1..=6).contains(&dir) {
            return Err(Error::Direction { family: self, dir });
        }
        Ok((dir + 2) % 6 + 1)
    }

    /// Chart shift in `a` picked up when `b` wraps once.
    fn twist(self, n_y: usize) -> i64 {
        let half = (n_y / 2) as i64;
        match self {
            LatticeFamily::Honeycomb => -half,
            _ => half,
        }
    }

    /// Sign of `g2ₓ`: the x half-column of `(a, b)` is `2a + sign·b`.
    fn column_sign(self) -> i64 {
        match self {
            LatticeFamily::Honeycomb => -1,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteIndex {
    pub a: i64,
    pub b: i64,
}

impl SiteIndex {
    pub const ORIGIN: SiteIndex = SiteIndex { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub family: LatticeFamily,
    pub n_x: usize,
    pub n_y: usize,
    pub epsilon: f64,
}

impl LatticeSpec {
    pub fn new(family: LatticeFamily, n_x: usize, n_y: usize, epsilon: f64) -> Result<Self> {
        if n_x < 2 || n_y < 2 {
            return Err(Error::Lattice(format!("need n_x, n_y >= 2, got {n_x}x{n_y}")));
        }
        if !n_y.is_multiple_of(2) {
            return Err(Error::Lattice(format!("n_y must be even, got {n_y}")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Lattice(format!("epsilon must be positive, got {epsilon}")));
        }
        if n_x.checked_mul(n_y).is_none_or(|n| n > u32::MAX as usize) {
            return Err(Error::Lattice("lattice too large".into()));
        }
        Ok(Self {
            family,
            n_x,
            n_y,
            epsilon,
        })
    }

    pub fn len(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reduces an arbitrary chart point to its representative in `[0, n_x) × [0, n_y)`.
    pub fn normalize(&self, a: i64, b: i64) -> SiteIndex {
        let n_y = self.n_y as i64;
        let q = b.div_euclid(n_y);
        let b = b.rem_euclid(n_y);
        let a = (a + q * self.family.twist(self.n_y)).rem_euclid(self.n_x as i64);
        SiteIndex { a, b }
    }

    #[inline]
    pub fn index(&self, site: SiteIndex) -> usize {
        let s = self.normalize(site.a, site.b);
        s.b as usize * self.n_x + s.a as usize
    }

    #[inline]
    pub fn site(&self, index: usize) -> SiteIndex {
        SiteIndex {
            a: (index % self.n_x) as i64,
            b: (index / self.n_x) as i64,
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = SiteIndex> + '_ {
        (0..self.len()).map(move |i| self.site(i))
    }

    pub fn translate(&self, site: SiteIndex, da: i64, db: i64) -> SiteIndex {
        self.normalize(site.a + da, site.b + db)
    }

    /// Neighbour `N_j(X)`; `j` runs over 1..=6 (triangular) or 1..=3 (honeycomb).
    pub fn neighbor(&self, site: SiteIndex, dir: u8) -> Result<SiteIndex> {
        let (da, db) = self.family.index_offset(dir)?;
        Ok(self.translate(site, da, db))
    }

    /// For every site, the flat index of the site at chart offset `(da, db)`.
    pub fn gather_table(&self, da: i64, db: i64) -> Vec<u32> {
        (0..self.len())
            .map(|i| {
                let s = self.site(i);
                self.index(SiteIndex::new(s.a + da, s.b + db)) as u32
            })
            .collect()
    }

    pub fn generators(&self) -> [[f64; 2]; 2] {
        let [g1, g2] = self.family.generators();
        let e = self.epsilon;
        [[g1[0] * e, g1[1] * e], [g2[0] * e, g2[1] * e]]
    }

    /// `a·g1 + b·g2` for the normalized representative of `site`.
    pub fn position(&self, site: SiteIndex) -> [f64; 2] {
        let s = self.normalize(site.a, site.b);
        let [x, y] = self.family.chart_to_plane(s.a as f64, s.b as f64);
        [x * self.epsilon, y * self.epsilon]
    }

    /// Side lengths `(Lx, Ly)` of the rectangular periodic cell.
    pub fn period(&self) -> [f64; 2] {
        let g2y = self.family.generators()[1][1];
        [self.n_x as f64 * self.epsilon, self.n_y as f64 * g2y * self.epsilon]
    }

    /// Position of the periodic image closest to the origin, in `[-L/2, L/2)` per axis.
    pub fn centered_position(&self, site: SiteIndex) -> [f64; 2] {
        let [x, y] = self.position(site);
        let [lx, ly] = self.period();
        [wrap_centered(x, lx), wrap_centered(y, ly)]
    }

    /// Number of distinct x columns, spaced ε/2 apart.
    pub fn half_columns(&self) -> usize {
        2 * self.n_x
    }

    /// x half-column of `site` in `0..2 n_x`; the column `h` sits at `x = h ε/2` (mod `n_x ε`).
    pub fn half_column(&self, site: SiteIndex) -> usize {
        let s = self.normalize(site.a, site.b);
        (2 * s.a + self.family.column_sign() * s.b).rem_euclid(2 * self.n_x as i64) as usize
    }

    /// x coordinate of half-column `h`, wrapped to `[-Lx/2, Lx/2)`.
    pub fn half_column_x(&self, h: usize) -> f64 {
        let lx = self.period()[0];
        wrap_centered(h as f64 * 0.5 * self.epsilon, lx)
    }

    /// Wave-vector components commensurate with the periodic cell: `2π p / Lx`, `2π q / Ly`.
    pub fn commensurate_k(&self, p: i64, q: i64) -> [f64; 2] {
        let [lx, ly] = self.period();
        [2.0 * PI * p as f64 / lx, 2.0 * PI * q as f64 / ly]
    }
}

fn wrap_centered(v: f64, period: f64) -> f64 {
    let w = v.rem_euclid(period);
    if w >= 0.5 * period {
        w - period
    } else {
        w
    }
}

/// Two complex amplitudes `(ψ^L, ψ^R)` per site, stored b-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    lattice: LatticeSpec,
    amps: Vec<[C64; 2]>,
}

impl SpinorField {
    pub fn zeros(lattice: LatticeSpec) -> Self {
        Self {
            lattice,
            amps: vec![[C64::new(0.0, 0.0); 2]; lattice.len()],
        }
    }

    pub fn from_fn(lattice: LatticeSpec, mut f: impl FnMut(SiteIndex) -> [C64; 2]) -> Self {
        let amps = lattice.sites().map(&mut f).collect();
        Self { lattice, amps }
    }

    pub fn from_amplitudes(lattice: LatticeSpec, amps: Vec<[C64; 2]>) -> Result<Self> {
        if amps.len() != lattice.len() {
            return Err(Error::FieldShape {
                expected: lattice.len(),
                got: amps.len(),
            });
        }
        Ok(Self { lattice, amps })
    }

    pub fn localized(lattice: LatticeSpec, site: SiteIndex, spinor: [C64; 2]) -> Self {
        let mut f = Self::zeros(lattice);
        let i = lattice.index(site);
        f.amps[i] = spinor;
        f
    }

    /// `A exp(-i k·X)` with `k` in physical (x, y) components.
    pub fn plane_wave(lattice: LatticeSpec, k: [f64; 2], polarization: [C64; 2]) -> Self {
        Self::from_fn(lattice, |s| {
            let [x, y] = lattice.position(s);
            let ph = C64::from_polar(1.0, -(k[0] * x + k[1] * y));
            [polarization[0] * ph, polarization[1] * ph]
        })
    }

    /// Normalized Gaussian packet `exp(-|X - X0|²/(2w²) + i k0·X) A` around the origin.
    pub fn gaussian(lattice: LatticeSpec, width: f64, k0: [f64; 2], polarization: [C64; 2]) -> Self {
        let mut f = Self::from_fn(lattice, |s| {
            let [x, y] = lattice.centered_position(s);
            let env = (-(x * x + y * y) / (2.0 * width * width)).exp();
            let ph = C64::from_polar(env, k0[0] * x + k0[1] * y);
            [polarization[0] * ph, polarization[1] * ph]
        });
        f.normalize();
        f
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[[C64; 2]] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [[C64; 2]] {
        &mut self.amps
    }

    pub fn get(&self, site: SiteIndex) -> [C64; 2] {
        self.amps[self.lattice.index(site)]
    }

    pub fn set(&mut self, site: SiteIndex, value: [C64; 2]) {
        let i = self.lattice.index(site);
        self.amps[i] = value;
    }

    /// `Σ_X |ψ^L|² + |ψ^R|²`, summed in storage order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for v in &mut self.amps {
                v[0] /= n;
                v[1] /= n;
            }
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).collect()
    }

    /// Multiplies every site by `exp(i φ(X))`.
    pub fn apply_phase(&mut self, mut phase: impl FnMut(SiteIndex) -> f64) {
        let lattice = self.lattice;
        for (i, v) in self.amps.iter_mut().enumerate() {
            let p = C64::from_polar(1.0, phase(lattice.site(i)));
            v[0] *= p;
            v[1] *= p;
        }
    }

    /// Field `Ψ'(X) = Ψ(X - d)` for the chart translation `d = (da, db)`.
    pub fn translated(&self, da: i64, db: i64) -> SpinorField {
        let table = self.lattice.gather_table(-da, -db);
        let amps = table.iter().map(|&j| self.amps[j as usize]).collect();
        Self {
            lattice: self.lattice,
            amps,
        }
    }

    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(u, v)| (u[0] - v[0]).norm().max((u[1] - v[1]).norm()))
            .fold(0.0, f64::max)
    }
}
