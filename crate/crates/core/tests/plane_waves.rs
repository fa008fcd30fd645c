//! Real-space stepping of exact plane waves against the momentum-space eigenphases.

use dqw_core::dispersion::{physical_to_chart, polarization};
use dqw_core::{build_walk, LatticeSpec, SpinorField, WalkKind, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_walk(kind: WalkKind, mass: f64, samples: usize, seed: u64) -> f64 {
    let lat = LatticeSpec::new(kind.family(), 24, 20, 1.0).unwrap();
    let walk = build_walk(kind, mass, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let k = lat.commensurate_k(rng.gen_range(-12..12), rng.gen_range(-10..10));
        let chart = physical_to_chart(kind, k);
        for (omega, a) in polarization(&walk, chart).unwrap() {
            let f = SpinorField::plane_wave(lat, k, a);
            let g = walk.step(&f, 0, None).unwrap();
            let phase = C64::from_polar(1.0, omega);
            for (u, v) in g.amplitudes().iter().zip(f.amplitudes()) {
                worst = worst.max((u[0] - phase * v[0]).norm()).max((u[1] - phase * v[1]).norm());
            }
        }
    }
    worst
}

#[test]
fn plane_waves_pick_up_their_eigenphase() {
    for (i, kind) in WalkKind::ALL.into_iter().enumerate() {
        for mass in [0.0, 1.1] {
            let err = check_walk(kind, mass, 20, 100 + i as u64);
            assert!(err < 1e-10, "{kind:?} m={mass}: {err:e}");
        }
    }
}

#[test]
fn three_step_massive_corner_wave() {
    // m = π, k = (π, π/√3)
    let kind = WalkKind::ThreeStepEquilateral;
    let lat = LatticeSpec::new(kind.family(), 12, 12, 1.0).unwrap();
    let k = lat.commensurate_k(6, 3);
    assert!((k[0] - std::f64::consts::PI).abs() < 1e-12);
    assert!((k[1] - std::f64::consts::PI / 3f64.sqrt()).abs() < 1e-12);
    let walk = build_walk(kind, std::f64::consts::PI, 1.0).unwrap();
    for (omega, a) in polarization(&walk, physical_to_chart(kind, k)).unwrap() {
        let f = SpinorField::plane_wave(lat, k, a);
        let g = walk.step(&f, 0, None).unwrap();
        let phase = C64::from_polar(1.0, omega);
        for (u, v) in g.amplitudes().iter().zip(f.amplitudes()) {
            assert!((u[0] - phase * v[0]).norm() < 1e-10 && (u[1] - phase * v[1]).norm() < 1e-10);
        }
    }
}
