//! Fixtures shared by the kernel benchmarks.

use dqw_core::{build_walk, LatticeSpec, Propagator, SiteIndex, SpinorField, WalkKind, WalkSpec, C64};

pub fn walk(kind: WalkKind, mass: f64) -> WalkSpec {
    build_walk(kind, mass, 1.0).expect("valid walk")
}

/// A propagator and a symmetric localized start on an `n × n` lattice.
pub fn stepping_fixture(kind: WalkKind, n: usize) -> (Propagator, SpinorField) {
    let lat = LatticeSpec::new(kind.family(), n, n, 1.0).expect("valid lattice");
    let prop = Propagator::new(&walk(kind, 0.5), &lat).expect("matching family");
    let h = C64::new(0.5f64.sqrt(), 0.0);
    (prop, SpinorField::localized(lat, SiteIndex::ORIGIN, [h, h]))
}
