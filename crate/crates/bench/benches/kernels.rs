use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cwl_core::cherednik_transform::{PolyBump, SmoothFunction, Transformer};
use cwl_core::opdam_kernel::{KernelSolver, RankOne};
use cwl_core::plancherel::SpectralDensity;
use cwl_core::{build_root_system, Complex64 as C64, Family};

fn kernel_solve(c: &mut Criterion) {
    let sys = build_root_system(Family::A1, &[0.5]).unwrap();
    let solver = KernelSolver::new(RankOne::from_system(&sys).unwrap(), 40.0, 3.0);
    c.bench_function("kernel solve A1 k=1/2, λ=0.3+25i", |b| {
        b.iter(|| solver.solve(black_box(C64::new(0.3, 25.0))).unwrap())
    });
}

fn transform(c: &mut Criterion) {
    let t = Transformer::new(&build_root_system(Family::A1, &[1.0]).unwrap()).unwrap();
    let f = PolyBump::new(0.1, 0.9, 16);
    let lambdas: Vec<f64> = (0..64).map(|j| 0.5 * j as f64).collect();
    c.bench_function("forward and tilde transform, 64 frequencies", |b| {
        b.iter(|| t.transform_batch(&[&f as &dyn SmoothFunction], black_box(&lambdas)).unwrap())
    });
}

fn density(c: &mut Criterion) {
    let gamma = SpectralDensity::new(&build_root_system(Family::B2, &[1.0, 2.0]).unwrap());
    let poly = gamma.clone().with_polynomial_mode().unwrap();
    let l = [C64::new(3.1, 0.4), C64::new(-1.7, 0.2)];
    let mut g = c.benchmark_group("density B2 k=(1,2)");
    g.bench_function("gamma form", |b| b.iter(|| gamma.eval(black_box(&l)).unwrap()));
    g.bench_function("polynomial form", |b| b.iter(|| poly.eval(black_box(&l)).unwrap()));
    g.finish();
}

criterion_group!(benches, kernel_solve, transform, density);
criterion_main!(benches);
