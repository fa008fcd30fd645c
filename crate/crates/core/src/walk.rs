//! Walk builders and the real-space time-stepping operator.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinAngles, Mat2, C64};
use crate::error::{Error, Result};
use crate::gauge::FieldConfig;
use crate::lattice::{LatticeFamily, LatticeSpec, SpinorField};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Sites per lattice above which a substep is split across threads.
const PARALLEL_SITES: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkKind {
    SixStepEquilateral,
    ThreeStepEquilateral,
    ThreeStepIsosceles,
    ThreeStepHoneycomb,
}

impl WalkKind {
    pub const ALL: [WalkKind; 4] = [
        WalkKind::SixStepEquilateral,
        WalkKind::ThreeStepEquilateral,
        WalkKind::ThreeStepIsosceles,
        WalkKind::ThreeStepHoneycomb,
    ];

    pub fn family(self) -> LatticeFamily {
        match self {
            WalkKind::SixStepEquilateral | WalkKind::ThreeStepEquilateral => {
                LatticeFamily::EquilateralTriangle
            }
            WalkKind::ThreeStepIsosceles => LatticeFamily::IsoscelesTriangle,
            WalkKind::ThreeStepHoneycomb => LatticeFamily::Honeycomb,
        }
    }

    pub fn substep_count(self) -> usize {
        match self {
            WalkKind::SixStepEquilateral => 6,
            _ => 3,
        }
    }

    /// Time step per unit lattice spacing.
    pub fn dt_per_epsilon(self) -> f64 {
        match self {
            WalkKind::SixStepEquilateral | WalkKind::ThreeStepEquilateral => 1.5,
            WalkKind::ThreeStepIsosceles => 1.0,
            WalkKind::ThreeStepHoneycomb => 0.75 * SQRT3,
        }
    }

    /// Mass period of the dispersion relation at ε = 1.
    pub fn mass_period(self) -> f64 {
        TAU / self.dt_per_epsilon()
    }

    pub fn name(self) -> &'static str {
        match self {
            WalkKind::SixStepEquilateral => "six-step",
            WalkKind::ThreeStepEquilateral => "three-step",
            WalkKind::ThreeStepIsosceles => "isosceles",
            WalkKind::ThreeStepHoneycomb => "honeycomb",
        }
    }
}

impl std::str::FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WalkKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown walk kind '{s}'")))
    }
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Source directions of a shift: `(SΨ)(X) = (ψ^L(N_left(X)), ψ^R(N_right(X)))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRule {
    pub left_dir: u8,
    pub right_dir: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubStep {
    pub pre_rotation: Option<CoinAngles>,
    pub shift: ShiftRule,
    /// Fixed coin applied right after the shift.
    pub coin: CoinAngles,
    pub post_rotation: Option<CoinAngles>,
    /// Gauge coin slot (0-based) applied after `coin`, if the walk supports one.
    pub coin_slot: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub kind: WalkKind,
    pub substeps: Vec<SubStep>,
    pub mass: f64,
    pub epsilon: f64,
    pub dt: f64,
    /// Applied after the last substep.
    pub mass_coin: Option<CoinAngles>,
    /// `(γ⁰, γ¹, γ²)` of the continuum limit.
    pub continuum_gammas: [Mat2; 3],
}

/// Builds the substep sequence of `kind`.
///
/// The mass enters through a coin angle; its mass-dependent part is reduced
/// modulo 2π so that masses differing by a period give bit-identical walks.
pub fn build_walk(kind: WalkKind, mass: f64, epsilon: f64) -> Result<WalkSpec> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if !mass.is_finite() {
        return Err(Error::InvalidArgument(format!("mass must be finite, got {mass}")));
    }
    let dt = kind.dt_per_epsilon() * epsilon;
    let plain = |l: u8, r: u8, coin: CoinAngles, rot: Option<f64>, slot| SubStep {
        pre_rotation: rot.map(CoinAngles::rotation),
        shift: ShiftRule {
            left_dir: l,
            right_dir: r,
        },
        coin,
        post_rotation: rot.map(CoinAngles::rotation_inverse),
        coin_slot: slot,
    };
    let id = CoinAngles::IDENTITY;
    let mass_angle = (mass * dt).rem_euclid(TAU);
    let (substeps, mass_coin) = match kind {
        WalkKind::SixStepEquilateral => {
            let s = (1..=6u8)
                .map(|j| {
                    let theta = PI / 12.0 + f64::from(j - 1) * PI / 6.0;
                    plain(j, j % 6 + 1, id, Some(theta), None)
                })
                .collect();
            (s, Some(CoinAngles::mixing(mass_angle)))
        }
        WalkKind::ThreeStepEquilateral => {
            let s = vec![
                plain(1, 4, id, None, Some(0)),
                plain(2, 5, id, Some(PI / 6.0), Some(1)),
                plain(3, 6, id, Some(PI / 3.0), Some(2)),
            ];
            (s, Some(CoinAngles::mixing(mass_angle)))
        }
        WalkKind::ThreeStepIsosceles => {
            let first = -PI / 4.0 + (mass * epsilon).rem_euclid(TAU);
            let s = vec![
                plain(1, 4, CoinAngles::mixing(first), None, None),
                plain(2, 5, CoinAngles::mixing(0.0), None, None),
                plain(3, 6, CoinAngles::mixing(PI / 4.0), None, None),
            ];
            (s, None)
        }
        WalkKind::ThreeStepHoneycomb => {
            let s = (1..=3u8)
                .map(|j| {
                    let theta = PI / 6.0 + f64::from(j - 1) * PI / 3.0;
                    plain(j, j % 3 + 1, id, Some(theta), None)
                })
                .collect();
            (s, Some(CoinAngles::mixing(mass_angle)))
        }
    };
    Ok(WalkSpec {
        kind,
        substeps,
        mass,
        epsilon,
        dt,
        mass_coin,
        continuum_gammas: gammas(kind),
    })
}

fn gammas(kind: WalkKind) -> [Mat2; 3] {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let s1 = Mat2::new(zero, one, one, zero);
    let s2 = Mat2::new(zero, -i, i, zero);
    let s3 = Mat2::diag(one, -one);
    match kind {
        WalkKind::SixStepEquilateral | WalkKind::ThreeStepHoneycomb => {
            [s1, s3.scale(-i), s2.scale(-i)]
        }
        WalkKind::ThreeStepEquilateral => [s1, s2.scale(i), s3.scale(-i)],
        WalkKind::ThreeStepIsosceles => [s1, s2.scale(i), s3.scale(i)],
    }
}

impl WalkSpec {
    pub fn family(&self) -> LatticeFamily {
        self.kind.family()
    }

    /// Mass coin angle θ such that the mass coin is `U(0, 0, −π/2, θ)`.
    pub fn mass_angle(&self) -> f64 {
        match self.kind {
            WalkKind::ThreeStepIsosceles => self.substeps[0].coin.theta + PI / 4.0,
            _ => self.mass_coin.map_or(0.0, |c| c.theta),
        }
    }

    /// One application of the walk, building the gather tables on the fly.
    pub fn step(&self, field: &SpinorField, step: usize, gauge: Option<&FieldConfig>) -> Result<SpinorField> {
        Propagator::new(self, field.lattice())?.step(field, step, gauge)
    }
}

struct Stage {
    left: Vec<u32>,
    right: Vec<u32>,
    /// Gather tables of the inverse shift.
    left_back: Vec<u32>,
    right_back: Vec<u32>,
    pre: Mat2,
    coin: Mat2,
    post: Mat2,
    slot: Option<usize>,
}

/// A walk bound to a lattice, with precomputed neighbour tables.
pub struct Propagator {
    walk: WalkSpec,
    lattice: LatticeSpec,
    stages: Vec<Stage>,
}

impl Propagator {
    pub fn new(walk: &WalkSpec, lattice: &LatticeSpec) -> Result<Self> {
        if lattice.family != walk.family() {
            return Err(Error::FamilyMismatch {
                walk: walk.kind,
                expected: walk.family(),
                field: lattice.family,
            });
        }
        let last = walk.substeps.len() - 1;
        let mass = walk.mass_coin.map_or(Mat2::IDENTITY, |c| c.matrix());
        let stages = walk
            .substeps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (la, lb) = lattice.family.index_offset(s.shift.left_dir)?;
                let (ra, rb) = lattice.family.index_offset(s.shift.right_dir)?;
                let mut post = s.post_rotation.map_or(Mat2::IDENTITY, |c| c.matrix());
                if i == last {
                    post = mass * post;
                }
                Ok(Stage {
                    left: lattice.gather_table(la, lb),
                    right: lattice.gather_table(ra, rb),
                    left_back: lattice.gather_table(-la, -lb),
                    right_back: lattice.gather_table(-ra, -rb),
                    pre: s.pre_rotation.map_or(Mat2::IDENTITY, |c| c.matrix()),
                    coin: s.coin.matrix(),
                    post,
                    slot: s.coin_slot,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            walk: walk.clone(),
            lattice: *lattice,
            stages,
        })
    }

    pub fn walk(&self) -> &WalkSpec {
        &self.walk
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    fn check(&self, field: &SpinorField, gauge: Option<&FieldConfig>) -> Result<()> {
        if field.lattice() != &self.lattice {
            if field.lattice().family != self.lattice.family {
                return Err(Error::FamilyMismatch {
                    walk: self.walk.kind,
                    expected: self.lattice.family,
                    field: field.lattice().family,
                });
            }
            return Err(Error::FieldShape {
                expected: self.lattice.len(),
                got: field.lattice().len(),
            });
        }
        if gauge.is_some() && self.walk.kind != WalkKind::ThreeStepEquilateral {
            return Err(Error::GaugeUnsupported(self.walk.kind));
        }
        Ok(())
    }

    /// Per-stage matrices applied after the shift: `post · G · coin`.
    fn after_shift(&self, stage: &Stage, step: usize, gauge: Option<&FieldConfig>) -> Result<Vec<Mat2>> {
        match (gauge, stage.slot) {
            (Some(g), Some(slot)) => Ok(g
                .coin_matrices(slot, step, &self.lattice)?
                .into_iter()
                .map(|m| stage.post * m * stage.coin)
                .collect()),
            _ => Ok(vec![stage.post * stage.coin]),
        }
    }

    /// `Ψ(t + Δt) = W Ψ(t)` for the step starting at `t = step·Δt`.
    pub fn step(&self, field: &SpinorField, step: usize, gauge: Option<&FieldConfig>) -> Result<SpinorField> {
        let mut out = field.clone();
        let mut scratch = Vec::new();
        self.step_in_place(&mut out, &mut scratch, step, gauge)?;
        Ok(out)
    }

    /// Like [`Propagator::step`] but reuses `scratch` as the second buffer.
    pub fn step_in_place(
        &self,
        field: &mut SpinorField,
        scratch: &mut Vec<[C64; 2]>,
        step: usize,
        gauge: Option<&FieldConfig>,
    ) -> Result<()> {
        self.check(field, gauge)?;
        scratch.resize(self.lattice.len(), [C64::new(0.0, 0.0); 2]);
        for stage in &self.stages {
            let after = self.after_shift(stage, step, gauge)?;
            forward_stage(stage, &after, field.amplitudes(), scratch);
            field.amplitudes_mut().swap_with_slice(scratch);
        }
        Ok(())
    }

    /// Inverse of the step starting at `t = step·Δt`: maps `Ψ(t + Δt)` back to `Ψ(t)`.
    pub fn step_back(&self, field: &SpinorField, step: usize, gauge: Option<&FieldConfig>) -> Result<SpinorField> {
        self.check(field, gauge)?;
        let mut cur = field.clone();
        let mut scratch = vec![[C64::new(0.0, 0.0); 2]; self.lattice.len()];
        for stage in self.stages.iter().rev() {
            let after: Vec<Mat2> = self
                .after_shift(stage, step, gauge)?
                .iter()
                .map(Mat2::adjoint)
                .collect();
            backward_stage(stage, &after, cur.amplitudes(), &mut scratch);
            cur.amplitudes_mut().swap_with_slice(&mut scratch);
        }
        Ok(cur)
    }
}

#[inline]
fn pick(ms: &[Mat2], i: usize) -> &Mat2 {
    if ms.len() == 1 {
        &ms[0]
    } else {
        &ms[i]
    }
}

fn for_each_site(dst: &mut [[C64; 2]], f: impl Fn(usize) -> [C64; 2] + Sync) {
    if dst.len() >= PARALLEL_SITES {
        dst.par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
    } else {
        dst.iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
    }
}

fn forward_stage(stage: &Stage, after: &[Mat2], src: &[[C64; 2]], dst: &mut [[C64; 2]]) {
    let p = stage.pre.0;
    for_each_site(dst, |i| {
        let l = src[stage.left[i] as usize];
        let r = src[stage.right[i] as usize];
        let v = [p[0] * l[0] + p[1] * l[1], p[2] * r[0] + p[3] * r[1]];
        pick(after, i).apply(v)
    });
}

fn backward_stage(stage: &Stage, after_adj: &[Mat2], src: &[[C64; 2]], dst: &mut [[C64; 2]]) {
    let pre_adj = stage.pre.adjoint();
    for_each_site(dst, |i| {
        let jl = stage.left_back[i] as usize;
        let jr = stage.right_back[i] as usize;
        let ul = pick(after_adj, jl).apply(src[jl])[0];
        let ur = pick(after_adj, jr).apply(src[jr])[1];
        pre_adj.apply([ul, ur])
    });
}

/// Receives the field after every step of [`evolve`], starting with the initial field.
pub trait Observer {
    fn observe(&mut self, step: usize, field: &SpinorField);
}

/// Runs `steps` steps, calling every observer on the initial field and after each step.
pub fn evolve(
    walk: &WalkSpec,
    field: &SpinorField,
    steps: usize,
    gauge: Option<&FieldConfig>,
    observers: &mut [&mut dyn Observer],
) -> Result<SpinorField> {
    let prop = Propagator::new(walk, field.lattice())?;
    let mut cur = field.clone();
    let mut scratch = Vec::new();
    for o in observers.iter_mut() {
        o.observe(0, &cur);
    }
    for n in 0..steps {
        prop.step_in_place(&mut cur, &mut scratch, n, gauge)?;
        for o in observers.iter_mut() {
            o.observe(n + 1, &cur);
        }
    }
    Ok(cur)
}
