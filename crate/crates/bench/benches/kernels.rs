use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dqw_bench::{stepping_fixture, walk};
use dqw_core::{min_gap, scan_bz, table_walk, uniform_electric_config, ElectricField, WalkKind};

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for n in [64usize, 256] {
        for kind in WalkKind::ALL {
            let (prop, start) = stepping_fixture(kind, n);
            group.bench_with_input(BenchmarkId::new(kind.name(), n), &n, |b, _| {
                let mut f = start.clone();
                let mut scratch = Vec::new();
                b.iter(|| prop.step_in_place(&mut f, &mut scratch, 0, None).unwrap());
            });
        }
    }
    let (prop, start) = stepping_fixture(WalkKind::ThreeStepEquilateral, 256);
    let field = uniform_electric_config(ElectricField::new(0.1, 0.0));
    group.bench_function("three-step/256/field", |b| {
        let mut f = start.clone();
        let mut scratch = Vec::new();
        let mut n = 0;
        b.iter(|| {
            prop.step_in_place(&mut f, &mut scratch, n, Some(&field)).unwrap();
            n += 1;
        });
    });
    group.finish();
}

fn dispersion(c: &mut Criterion) {
    let mut group = c.benchmark_group("dispersion");
    group.sample_size(10);
    for kind in WalkKind::ALL {
        let w = walk(kind, 1.0);
        group.bench_function(BenchmarkId::new("scan_bz_256", kind.name()), |b| {
            b.iter(|| scan_bz(&w, 256, 256).unwrap())
        });
    }
    let w = table_walk(WalkKind::ThreeStepEquilateral, std::f64::consts::PI).unwrap();
    group.bench_function("min_gap/three-step/pi", |b| b.iter(|| min_gap(&w).unwrap()));
    group.finish();
}

criterion_group!(benches, step, dispersion);
criterion_main!(benches);
