//! Gauge coins for the three-step equilateral walk.
//!
//! Substep `i ∈ {0, 1, 2}` of step `n` runs from sub-time `3n + i` to
//! `3n + i + 1` (in units of Δt/3) and is followed by the coin
//! `U(α_i, ξ_i, ζ_i, 0)` evaluated at step `n`.

use serde::{Deserialize, Serialize};

use crate::coin::{CoinAngles, Mat2};
use crate::error::{Error, Result};
use crate::lattice::{LatticeFamily, LatticeSpec, SiteIndex, SpinorField};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const FORMAT: &str = "dqw-field";
const VERSION: u32 = 1;

/// Source directions `(j, j + 3)` of the three shifts.
const PAIRS: [(u8, u8); 3] = [(1, 4), (2, 5), (3, 6)];

/// A time `step + third/3` in walk steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubTime {
    pub step: usize,
    pub third: usize,
}

impl SubTime {
    pub fn from_index(index: usize) -> Self {
        Self {
            step: index / 3,
            third: index % 3,
        }
    }

    pub fn index(self) -> usize {
        3 * self.step + self.third
    }

    pub fn as_steps(self) -> f64 {
        self.step as f64 + self.third as f64 / 3.0
    }
}

/// Uniform electric field in lattice units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ElectricField {
    pub ex: f64,
    pub ey: f64,
}

impl ElectricField {
    pub const fn new(ex: f64, ey: f64) -> Self {
        Self { ex, ey }
    }

    pub fn magnitude(&self) -> f64 {
        self.ex.hypot(self.ey)
    }
}

/// How a uniform field is turned into ξ angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformScheme {
    /// `ξ_i = τ F·v_i` with `F = (−Ex, Ey)`, `v_i` the direction-i offset and
    /// `τ` the substep input time: every wave vector drifts by `F` per step.
    #[default]
    MomentumDrift,
    /// `ξ_1 = 0, ξ_2 = n(−3Ex + √3Ey)/2, ξ_3 = n(3Ex + √3Ey)/2` at step `n`.
    LiteralRamp,
    /// The same ξ_2, ξ_3 without the time factor.
    LiteralStatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformElectric {
    #[serde(flatten)]
    pub field: ElectricField,
    #[serde(default)]
    pub scheme: UniformScheme,
}

impl UniformElectric {
    fn angles(&self, slot: usize, step: usize) -> CoinAngles {
        let ElectricField { ex, ey } = self.field;
        let xi = match self.scheme {
            UniformScheme::MomentumDrift => {
                let tau = step as f64 + slot as f64 / 3.0;
                let v = LatticeFamily::EquilateralTriangle.chart_to_plane(
                    [1.0, 0.0, -1.0][slot],
                    [0.0, 1.0, 1.0][slot],
                );
                tau * (-ex * v[0] + ey * v[1])
            }
            UniformScheme::LiteralRamp | UniformScheme::LiteralStatic => {
                let t = match self.scheme {
                    UniformScheme::LiteralRamp => step as f64,
                    _ => 1.0,
                };
                match slot {
                    0 => 0.0,
                    1 => t * 0.5 * (-3.0 * ex + SQRT3 * ey),
                    _ => t * 0.5 * (3.0 * ex + SQRT3 * ey),
                }
            }
        };
        CoinAngles::phase(0.0, xi, 0.0)
    }
}

/// Angle fields tabulated per step, slot and site (b-major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleTable {
    pub n_x: usize,
    pub n_y: usize,
    pub horizon: usize,
    pub alpha: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
}

impl AngleTable {
    pub fn zeros(lattice: &LatticeSpec, horizon: usize) -> Self {
        let len = 3 * horizon * lattice.len();
        Self {
            n_x: lattice.n_x,
            n_y: lattice.n_y,
            horizon,
            alpha: vec![0.0; len],
            xi: vec![0.0; len],
            zeta: vec![0.0; len],
        }
    }

    fn sites(&self) -> usize {
        self.n_x * self.n_y
    }

    #[inline]
    pub fn offset(&self, slot: usize, step: usize, site: usize) -> usize {
        (3 * step + slot) * self.sites() + site
    }

    fn check(&self, lattice: &LatticeSpec, step: usize) -> Result<()> {
        if (self.n_x, self.n_y) != (lattice.n_x, lattice.n_y) {
            return Err(Error::FieldShape {
                expected: lattice.len(),
                got: self.sites(),
            });
        }
        let len = 3 * self.horizon * self.sites();
        if [&self.alpha, &self.xi, &self.zeta].iter().any(|v| v.len() != len) {
            return Err(Error::FieldShape {
                expected: len,
                got: self.alpha.len().min(self.xi.len()).min(self.zeta.len()),
            });
        }
        if step >= self.horizon {
            return Err(Error::GaugeHorizon {
                step,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    pub fn angles(&self, slot: usize, step: usize, site: usize) -> CoinAngles {
        let o = self.offset(slot, step, site);
        CoinAngles::phase(self.alpha[o], self.xi[o], self.zeta[o])
    }
}

/// Angle fields `(α_i, ξ_i, ζ_i)` of the three gauge coins; θ is always 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldConfig {
    UniformElectric(UniformElectric),
    Tabulated(AngleTable),
}

#[derive(Serialize, Deserialize)]
struct FieldDocument {
    format: String,
    version: u32,
    #[serde(flatten)]
    config: FieldConfig,
}

impl FieldConfig {
    /// All coins identity.
    pub fn free() -> Self {
        uniform_electric_config(ElectricField::default())
    }

    pub fn angles(&self, slot: usize, step: usize, lattice: &LatticeSpec, site: SiteIndex) -> Result<CoinAngles> {
        match self {
            FieldConfig::UniformElectric(u) => Ok(u.angles(slot, step)),
            FieldConfig::Tabulated(t) => {
                t.check(lattice, step)?;
                Ok(t.angles(slot, step, lattice.index(site)))
            }
        }
    }

    /// Coin matrices of `slot` at `step`: one entry if uniform, else one per site.
    pub fn coin_matrices(&self, slot: usize, step: usize, lattice: &LatticeSpec) -> Result<Vec<Mat2>> {
        match self {
            FieldConfig::UniformElectric(u) => Ok(vec![u.angles(slot, step).matrix()]),
            FieldConfig::Tabulated(t) => {
                t.check(lattice, step)?;
                Ok((0..lattice.len()).map(|x| t.angles(slot, step, x).matrix()).collect())
            }
        }
    }

    /// Samples the config on `horizon` steps.
    pub fn tabulate(&self, lattice: &LatticeSpec, horizon: usize) -> Result<AngleTable> {
        if let FieldConfig::Tabulated(t) = self {
            if horizon > 0 {
                t.check(lattice, horizon - 1)?;
            }
        }
        let mut table = AngleTable::zeros(lattice, horizon);
        for step in 0..horizon {
            for slot in 0..3 {
                for x in 0..lattice.len() {
                    let a = self.angles(slot, step, lattice, lattice.site(x))?;
                    let o = table.offset(slot, step, x);
                    table.alpha[o] = a.alpha;
                    table.xi[o] = a.xi;
                    table.zeta[o] = a.zeta;
                }
            }
        }
        Ok(table)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = FieldDocument {
            format: FORMAT.into(),
            version: VERSION,
            config: self.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: FieldDocument = serde_json::from_str(s)?;
        if doc.format != FORMAT || doc.version != VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported field document {} v{}",
                doc.format, doc.version
            )));
        }
        Ok(doc.config)
    }
}

/// Uniform field config using the default [`UniformScheme`].
pub fn uniform_electric_config(field: ElectricField) -> FieldConfig {
    FieldConfig::UniformElectric(UniformElectric {
        field,
        scheme: UniformScheme::default(),
    })
}

/// A phase change `δφ` tabulated at every sub-time `0..=3·horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseChange {
    sites: usize,
    horizon: usize,
    values: Vec<f64>,
}

impl PhaseChange {
    pub fn tabulate(lattice: &LatticeSpec, horizon: usize, mut f: impl FnMut(SubTime, SiteIndex) -> f64) -> Self {
        let sites = lattice.len();
        let mut values = Vec::with_capacity((3 * horizon + 1) * sites);
        for s in 0..=3 * horizon {
            for x in 0..sites {
                values.push(f(SubTime::from_index(s), lattice.site(x)));
            }
        }
        Self {
            sites,
            horizon,
            values,
        }
    }

    pub fn zero(lattice: &LatticeSpec, horizon: usize) -> Self {
        Self::tabulate(lattice, horizon, |_, _| 0.0)
    }

    /// Sub-step values `δφ(n) + r(δφ(n+1) − δφ(n))/3` from step-time endpoints.
    pub fn interpolate(endpoints: &StepPhase) -> Self {
        let sites = endpoints.sites;
        let horizon = endpoints.horizon;
        let mut values = Vec::with_capacity((3 * horizon + 1) * sites);
        for s in 0..=3 * horizon {
            let t = SubTime::from_index(s);
            for x in 0..sites {
                values.push(endpoints.interpolated(t.step, t.third, x));
            }
        }
        Self {
            sites,
            horizon,
            values,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    #[inline]
    pub fn at(&self, sub: usize, site: usize) -> f64 {
        self.values[sub * self.sites + site]
    }

    /// `Ψ ↦ e^{iδφ(t)} Ψ` at sub-time `sub`.
    pub fn apply(&self, field: &mut SpinorField, sub: usize) {
        let lattice = *field.lattice();
        field.apply_phase(|s| self.at(sub, lattice.index(s)));
    }
}

/// A phase change given at step times `0..=horizon` only.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPhase {
    sites: usize,
    horizon: usize,
    values: Vec<f64>,
}

impl StepPhase {
    pub fn tabulate(lattice: &LatticeSpec, horizon: usize, mut f: impl FnMut(usize, SiteIndex) -> f64) -> Self {
        let sites = lattice.len();
        let values = (0..=horizon)
            .flat_map(|n| (0..sites).map(move |x| (n, x)))
            .map(|(n, x)| f(n, lattice.site(x)))
            .collect();
        Self {
            sites,
            horizon,
            values,
        }
    }

    pub fn at(&self, step: usize, site: usize) -> f64 {
        self.values[step * self.sites + site]
    }

    fn interpolated(&self, step: usize, r: usize, site: usize) -> f64 {
        let a = self.at(step, site);
        if r == 0 {
            return a;
        }
        let b = self.at(step + 1, site);
        if r == 3 {
            return b;
        }
        a + r as f64 * (b - a) / 3.0
    }
}

/// Changes `(δα_i, δξ_i)` of the gauge coin angles, per step, slot and site.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeDelta {
    pub horizon: usize,
    pub sites: usize,
    pub d_alpha: Vec<f64>,
    pub d_xi: Vec<f64>,
}

impl GaugeDelta {
    fn zeros(sites: usize, horizon: usize) -> Self {
        Self {
            horizon,
            sites,
            d_alpha: vec![0.0; 3 * horizon * sites],
            d_xi: vec![0.0; 3 * horizon * sites],
        }
    }

    #[inline]
    fn offset(&self, slot: usize, step: usize, site: usize) -> usize {
        (3 * step + slot) * self.sites + site
    }

    pub fn alpha(&self, slot: usize, step: usize, site: usize) -> f64 {
        self.d_alpha[self.offset(slot, step, site)]
    }

    pub fn xi(&self, slot: usize, step: usize, site: usize) -> f64 {
        self.d_xi[self.offset(slot, step, site)]
    }

    pub fn is_zero(&self) -> bool {
        self.d_alpha.iter().chain(&self.d_xi).all(|&v| v == 0.0)
    }

    /// Adds the deltas to `config`, sampled over the delta's horizon.
    pub fn apply(&self, config: &FieldConfig, lattice: &LatticeSpec) -> Result<FieldConfig> {
        if self.sites != lattice.len() {
            return Err(Error::FieldShape {
                expected: lattice.len(),
                got: self.sites,
            });
        }
        let mut t = config.tabulate(lattice, self.horizon)?;
        for (a, d) in t.alpha.iter_mut().zip(&self.d_alpha) {
            *a += d;
        }
        for (x, d) in t.xi.iter_mut().zip(&self.d_xi) {
            *x += d;
        }
        Ok(FieldConfig::Tabulated(t))
    }
}

fn pair_tables(lattice: &LatticeSpec) -> Result<[(Vec<u32>, Vec<u32>); 3]> {
    if lattice.family != LatticeFamily::EquilateralTriangle {
        return Err(Error::Lattice(format!(
            "gauge coins need an equilateral lattice, got {:?}",
            lattice.family
        )));
    }
    let table = |d| -> Result<Vec<u32>> {
        let (a, b) = lattice.family.index_offset(d)?;
        Ok(lattice.gather_table(a, b))
    };
    Ok([
        (table(PAIRS[0].0)?, table(PAIRS[0].1)?),
        (table(PAIRS[1].0)?, table(PAIRS[1].1)?),
        (table(PAIRS[2].0)?, table(PAIRS[2].1)?),
    ])
}

/// Half-sum and half-difference of `phase` over the neighbour pair of `slot`.
#[inline]
fn sigma_delta(pairs: &[(Vec<u32>, Vec<u32>); 3], slot: usize, x: usize, phase: impl Fn(usize) -> f64) -> (f64, f64) {
    let l = phase(pairs[slot].0[x] as usize);
    let r = phase(pairs[slot].1[x] as usize);
    (0.5 * (l + r), 0.5 * (l - r))
}

/// Deltas of the general transformation law:
/// `δα_i = δφ(out, X) − σ_i`, `δξ_i = −δ_i`, with σ_i, δ_i taken at the substep input time.
pub fn gauge_delta(phase: &PhaseChange, lattice: &LatticeSpec) -> Result<GaugeDelta> {
    check_sites(phase.sites, lattice)?;
    let pairs = pair_tables(lattice)?;
    let mut d = GaugeDelta::zeros(phase.sites, phase.horizon);
    for step in 0..phase.horizon {
        for slot in 0..3 {
            let input = 3 * step + slot;
            for x in 0..phase.sites {
                let (sigma, delta) = sigma_delta(&pairs, slot, x, |y| phase.at(input, y));
                let o = d.offset(slot, step, x);
                d.d_alpha[o] = phase.at(input + 1, x) - sigma;
                d.d_xi[o] = -delta;
            }
        }
    }
    Ok(d)
}

/// The transformed config: evolving `e^{iδφ(0)}Ψ` with it gives `e^{iδφ(t)}` times the original evolution.
pub fn gauge_transform(config: &FieldConfig, phase: &PhaseChange, lattice: &LatticeSpec) -> Result<FieldConfig> {
    gauge_delta(phase, lattice)?.apply(config, lattice)
}

/// Deltas for a phase change that is constant over each step's three sub-times:
/// `δα_{1,2} = δφ(n) − σ_{1,2}(n)`, `δα_3 = δφ(n+1) − σ_3(n)`, `δξ_i = −δ_i(n)`.
pub fn simplified_transform_constant_substeps(phase: &PhaseChange, lattice: &LatticeSpec) -> Result<GaugeDelta> {
    check_sites(phase.sites, lattice)?;
    for step in 0..phase.horizon {
        for x in 0..phase.sites {
            let base = phase.at(3 * step, x);
            for r in 1..3 {
                let dev = (phase.at(3 * step + r, x) - base).abs();
                if dev > 0.0 {
                    return Err(Error::PhaseConstraint {
                        constraint: "constant sub-step",
                        step,
                        deviation: dev,
                    });
                }
            }
        }
    }
    let pairs = pair_tables(lattice)?;
    let mut d = GaugeDelta::zeros(phase.sites, phase.horizon);
    for step in 0..phase.horizon {
        let now = |y| phase.at(3 * step, y);
        for slot in 0..3 {
            for x in 0..phase.sites {
                let (sigma, delta) = sigma_delta(&pairs, slot, x, now);
                let target = if slot == 2 { phase.at(3 * step + 3, x) } else { now(x) };
                let o = d.offset(slot, step, x);
                d.d_alpha[o] = target - sigma;
                d.d_xi[o] = -delta;
            }
        }
    }
    Ok(d)
}

/// Deltas for a phase change that is linear in time between consecutive step times.
///
/// With `δφ_r = δφ(n) + r(δφ(n+1) − δφ(n))/3`: `δα_i = δφ_i(X) − σ_i[δφ_{i−1}]`,
/// `δξ_i = −δ_i[δφ_{i−1}]`.
pub fn simplified_transform_linear_interpolation(endpoints: &StepPhase, lattice: &LatticeSpec) -> Result<GaugeDelta> {
    check_sites(endpoints.sites, lattice)?;
    let pairs = pair_tables(lattice)?;
    let mut d = GaugeDelta::zeros(endpoints.sites, endpoints.horizon);
    for step in 0..endpoints.horizon {
        for slot in 0..3 {
            for x in 0..endpoints.sites {
                let (sigma, delta) =
                    sigma_delta(&pairs, slot, x, |y| endpoints.interpolated(step, slot, y));
                let o = d.offset(slot, step, x);
                d.d_alpha[o] = endpoints.interpolated(step, slot + 1, x) - sigma;
                d.d_xi[o] = -delta;
            }
        }
    }
    Ok(d)
}

fn check_sites(sites: usize, lattice: &LatticeSpec) -> Result<()> {
    if sites != lattice.len() {
        return Err(Error::FieldShape {
            expected: lattice.len(),
            got: sites,
        });
    }
    Ok(())
}

/// Continuum electromagnetic potential `(A0, A1, A2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PotentialTriple {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Potential from the scaled angles `ᾱ_i = α_i/ε`, `ξ̄_i = ξ_i/ε`.
pub fn potential_from_angles(alpha: [f64; 3], xi: [f64; 3], epsilon: f64) -> PotentialTriple {
    let a: [f64; 3] = alpha.map(|v| v / epsilon);
    let x: [f64; 3] = xi.map(|v| v / epsilon);
    PotentialTriple {
        a0: (2.0 / 3.0) * (a[0] + a[1] + a[2]),
        a1: -(2.0 / 3.0) * (x[0] + 0.5 * (x[1] - x[2])),
        a2: -(x[1] + x[2]) / SQRT3,
    }
}

/// Pointwise potential of `config` at `step` and `site`.
pub fn continuum_potential(
    config: &FieldConfig,
    lattice: &LatticeSpec,
    step: usize,
    site: SiteIndex,
) -> Result<PotentialTriple> {
    let mut alpha = [0.0; 3];
    let mut xi = [0.0; 3];
    for slot in 0..3 {
        let c = config.angles(slot, step, lattice, site)?;
        alpha[slot] = c.alpha;
        xi[slot] = c.xi;
    }
    Ok(potential_from_angles(alpha, xi, lattice.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> LatticeSpec {
        LatticeSpec::new(LatticeFamily::EquilateralTriangle, 6, 4, 1.0).unwrap()
    }

    fn wavy(l: &LatticeSpec, horizon: usize) -> PhaseChange {
        PhaseChange::tabulate(l, horizon, |t, s| {
            (0.3 * s.a as f64 - 0.7 * s.b as f64 + 0.11 * t.index() as f64).sin()
        })
    }

    #[test]
    fn zero_phase_leaves_config_unchanged() {
        let l = lat();
        let cfg = uniform_electric_config(ElectricField::new(0.2, -0.1));
        let t = gauge_transform(&cfg, &PhaseChange::zero(&l, 3), &l).unwrap();
        assert_eq!(t, FieldConfig::Tabulated(cfg.tabulate(&l, 3).unwrap()));
    }

    #[test]
    fn global_constant_phase_is_a_symmetry() {
        let l = lat();
        let d = gauge_delta(&PhaseChange::tabulate(&l, 2, |_, _| 0.8), &l).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn constant_substep_formulas_match_general_law() {
        let l = lat();
        let p = PhaseChange::tabulate(&l, 3, |t, s| {
            (s.a as f64 * 0.4 + s.b as f64 * 1.3 + t.step as f64 * 0.2).cos()
        });
        let simple = simplified_transform_constant_substeps(&p, &l).unwrap();
        assert_eq!(simple, gauge_delta(&p, &l).unwrap());
        let err = simplified_transform_constant_substeps(&wavy(&l, 2), &l).unwrap_err();
        assert!(matches!(err, Error::PhaseConstraint { .. }));
    }

    #[test]
    fn linear_in_x_phase_gives_half_differences() {
        let l = LatticeSpec::new(LatticeFamily::EquilateralTriangle, 40, 40, 1.0).unwrap();
        let k = 0.25;
        let p = PhaseChange::tabulate(&l, 1, |_, s| k * l.family.chart_to_plane(s.a as f64, s.b as f64)[0]);
        let d = simplified_transform_constant_substeps(&p, &l).unwrap();
        let centre = l.index(SiteIndex::new(10, 10));
        // δξ_i = −(δφ(X_i) − δφ(X_{i+3}))/2 = −k v_i,x
        assert!((d.xi(0, 0, centre) + k).abs() < 1e-12);
        assert!((d.xi(1, 0, centre) + 0.5 * k).abs() < 1e-12);
        assert!((d.xi(2, 0, centre) - 0.5 * k).abs() < 1e-12);
        let zero = simplified_transform_constant_substeps(&PhaseChange::zero(&l, 1), &l).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn linear_interpolation_matches_general_law() {
        let l = lat();
        let ends = StepPhase::tabulate(&l, 4, |n, s| (s.a as f64 * 0.9 - s.b as f64 * 0.2 + n as f64).sin());
        let simple = simplified_transform_linear_interpolation(&ends, &l).unwrap();
        let general = gauge_delta(&PhaseChange::interpolate(&ends), &l).unwrap();
        assert_eq!(simple, general);
    }

    #[test]
    fn time_linear_uniform_phase() {
        let l = lat();
        let e = 0.37;
        let ends = StepPhase::tabulate(&l, 3, |n, _| e * n as f64);
        let d = simplified_transform_linear_interpolation(&ends, &l).unwrap();
        assert!(d.d_xi.iter().all(|&v| v == 0.0));
        for step in 0..3 {
            for slot in 0..3 {
                let first = d.alpha(slot, step, 0);
                assert!((first - e / 3.0).abs() < 1e-12);
                assert!((0..l.len()).all(|x| (d.alpha(slot, step, x) - first).abs() < 1e-15));
            }
        }
        let zero = simplified_transform_linear_interpolation(&StepPhase::tabulate(&l, 2, |_, _| 0.0), &l).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn potential_examples() {
        let z = potential_from_angles([0.0; 3], [0.0; 3], 1.0);
        assert_eq!(z, PotentialTriple::default());
        let c = potential_from_angles([0.3; 3], [0.0; 3], 1.0);
        assert!((c.a0 - 0.6).abs() < 1e-15);
        let (ex, ey) = (0.7, -0.4);
        let p = potential_from_angles(
            [0.0; 3],
            [0.0, 0.5 * (-3.0 * ex + SQRT3 * ey), 0.5 * (3.0 * ex + SQRT3 * ey)],
            1.0,
        );
        assert!((p.a1 - ex).abs() < 1e-14 && (p.a2 + ey).abs() < 1e-14);
        let scaled = potential_from_angles([0.0; 3], [0.2, 0.0, 0.0], 0.5);
        assert!((scaled.a1 + 2.0 / 3.0 * 0.4).abs() < 1e-15);
    }

    #[test]
    fn drift_and_ramp_share_the_continuum_potential() {
        let l = lat();
        let f = ElectricField::new(0.13, 0.29);
        let ramp = FieldConfig::UniformElectric(UniformElectric {
            field: f,
            scheme: UniformScheme::LiteralRamp,
        });
        for step in [0, 1, 7] {
            let p = continuum_potential(&ramp, &l, step, SiteIndex::ORIGIN).unwrap();
            assert!((p.a1 - f.ex * step as f64).abs() < 1e-12);
            assert!((p.a2 + f.ey * step as f64).abs() < 1e-12);
        }
        let drift = UniformElectric { field: f, scheme: UniformScheme::MomentumDrift };
        let per_time: Vec<f64> = (0..3)
            .map(|slot| drift.angles(slot, 2).xi / (2.0 + slot as f64 / 3.0))
            .collect();
        let p = potential_from_angles([0.0; 3], [per_time[0], per_time[1], per_time[2]], 1.0);
        assert!((p.a1 - f.ex).abs() < 1e-12 && (p.a2 + f.ey).abs() < 1e-12 && p.a0 == 0.0);
    }

    #[test]
    fn drift_matches_literal_angles_when_ex_is_zero() {
        let f = ElectricField::new(0.0, 0.31);
        let drift = UniformElectric { field: f, scheme: UniformScheme::MomentumDrift };
        let stat = UniformElectric { field: f, scheme: UniformScheme::LiteralStatic };
        for slot in 0..3 {
            let d = drift.angles(slot, 1).xi / (1.0 + slot as f64 / 3.0);
            assert!((d - stat.angles(slot, 0).xi).abs() < 1e-15);
        }
    }

    #[test]
    fn free_config_is_identity() {
        let l = lat();
        for slot in 0..3 {
            let m = FieldConfig::free().coin_matrices(slot, 5, &l).unwrap();
            assert_eq!(m.len(), 1);
            assert!(m[0].is_identity());
        }
    }

    #[test]
    fn tabulated_horizon_and_shape_errors() {
        let l = lat();
        let t = FieldConfig::Tabulated(AngleTable::zeros(&l, 2));
        assert!(matches!(t.coin_matrices(0, 2, &l), Err(Error::GaugeHorizon { step: 2, horizon: 2 })));
        let other = LatticeSpec::new(LatticeFamily::EquilateralTriangle, 4, 4, 1.0).unwrap();
        assert!(matches!(t.coin_matrices(0, 0, &other), Err(Error::FieldShape { .. })));
    }

    #[test]
    fn json_round_trip() {
        let l = lat();
        let u = uniform_electric_config(ElectricField::new(0.1, 0.0));
        let s = u.to_json().unwrap();
        assert!(s.contains("\"type\": \"uniform_electric\""));
        assert!(s.contains("\"format\": \"dqw-field\""));
        assert_eq!(FieldConfig::from_json(&s).unwrap(), u);
        let t = gauge_transform(&u, &wavy(&l, 2), &l).unwrap();
        assert_eq!(FieldConfig::from_json(&t.to_json().unwrap()).unwrap(), t);
        let bad = s.replace("\"version\": 1", "\"version\": 9");
        assert!(FieldConfig::from_json(&bad).is_err());
    }
}
