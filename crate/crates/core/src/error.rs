use thiserror::Error;

use crate::lattice::LatticeFamily;
use crate::walk::WalkKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("direction {dir} is not defined on the {family:?} lattice")]
    Direction { family: LatticeFamily, dir: u8 },

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("field lives on a {field:?} lattice but the {walk:?} walk needs {expected:?}")]
    FamilyMismatch {
        walk: WalkKind,
        expected: LatticeFamily,
        field: LatticeFamily,
    },

    #[error("gauge coins are only implemented for the three-step equilateral walk, not {0:?}")]
    GaugeUnsupported(WalkKind),

    #[error("tabulated field covers {horizon} steps, step {step} requested")]
    GaugeHorizon { step: usize, horizon: usize },

    #[error("field table has {got} sites, lattice has {expected}")]
    FieldShape { expected: usize, got: usize },

    #[error("phase change violates the {constraint} constraint at step {step} (deviation {deviation:e})")]
    PhaseConstraint {
        constraint: &'static str,
        step: usize,
        deviation: f64,
    },

    #[error("walk matrix is not unitary at k = ({kx}, {ky}): {detail}")]
    NonUnitary { kx: f64, ky: f64, detail: String },

    #[error("series of length {len} is too short for period estimation (need {min})")]
    SeriesTooShort { len: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
