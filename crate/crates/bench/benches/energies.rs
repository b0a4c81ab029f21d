use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cwl_core::cherednik_transform::{mirrored, radial_rule, PolyBump, Transformer};
use cwl_core::special_fn::RadialProfile;
use cwl_core::wave_energy::{energies, energy_difference, GridSpec, SpectralState};
use cwl_core::{build_root_system, Family};

fn rank_one(c: &mut Criterion) {
    let t = Transformer::new(&build_root_system(Family::A1, &[0.5]).unwrap()).unwrap();
    let c0 = t.calibrate_c0(2.0, &mirrored(&radial_rule(60.0, 0.5, 16)), 1e-8).unwrap().c0;
    let (f, g) = (PolyBump::new(0.1, 0.9, 16), PolyBump::new(-0.15, 0.85, 16));
    let mut group = c.benchmark_group("rank-one A1 k=1/2");
    group.sample_size(10);
    group.bench_function("spectral state, Λ=80", |b| {
        b.iter(|| SpectralState::rank_one(&t, &f, &g, c0, GridSpec::new(80.0, 8.0)).unwrap())
    });
    let s = SpectralState::rank_one(&t, &f, &g, c0, GridSpec::new(80.0, 8.0)).unwrap();
    group.bench_function("energies at one time", |b| b.iter(|| energies(&s, black_box(5.3)).unwrap()));
    group.bench_function("P-K by both paths", |b| {
        b.iter(|| energy_difference(&s, black_box(5.3)).unwrap())
    });
    group.finish();
}

fn model(c: &mut Criterion) {
    let sys = build_root_system(Family::A2, &[1.0]).unwrap();
    let p = RadialProfile::new(1.0, 11, 2, 12.0).unwrap();
    let mut group = c.benchmark_group("model A2 k=1");
    group.sample_size(10);
    group.bench_function("spectral state, Λ=120", |b| {
        b.iter(|| SpectralState::model_profile(&sys, None, Some(&p), GridSpec::new(120.0, 16.0), 64).unwrap())
    });
    group.finish();
}

criterion_group!(benches, rank_one, model);
criterion_main!(benches);
