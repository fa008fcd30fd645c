//! Discrete-time Dirac quantum walks on triangular and honeycomb lattices.

pub mod analysis;
pub mod coin;
pub mod dispersion;
pub mod error;
pub mod export;
pub mod gauge;
pub mod lattice;
pub mod observe;
pub mod walk;

pub use coin::{u2_from_angles, CoinAngles, Mat2, C64};
pub use dispersion::{
    cone_slope_check, dispersion_at, min_gap, scan_bz, table_walk, walk_matrix, ConeReport, DispersionResult,
    GapReport, WaveVector,
};
pub use error::{Error, Result};
pub use gauge::{
    continuum_potential, gauge_transform, uniform_electric_config, ElectricField, FieldConfig, PhaseChange,
    PotentialTriple,
};
pub use lattice::{LatticeFamily, LatticeSpec, SiteIndex, SpinorField};
pub use walk::{build_walk, evolve, Observer, Propagator, WalkKind, WalkSpec};
