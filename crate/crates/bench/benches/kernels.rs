use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use detune_bench::{fig2_params, fig5_params, hermitian};
use detune_core::dissipative::{simulate_collective_decay, GammaScaling};
use detune_core::numerics::{cubic_roots, hermitian_eig, unitary_propagator, LindbladOptions};
use detune_core::propagators::{lambda_nonresonant_exact, lambda_resonant_u, two_level_u};
use detune_core::trajectory::uniform_grid;
use detune_core::{LambdaParams, C64};

fn eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for dim in [3, 8, 16, 32] {
        let h = hermitian(dim);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &h, |b, h| b.iter(|| hermitian_eig(black_box(h))));
    }
    group.finish();
    let h = hermitian(8);
    c.bench_function("unitary_propagator_8", |b| b.iter(|| unitary_propagator(black_box(&h), 1.3)));
}

fn closed_forms(c: &mut Criterion) {
    let p = fig2_params(25);
    c.bench_function("two_level_u", |b| b.iter(|| two_level_u(black_box(&p), black_box(3.7))));
    let lp = LambdaParams::resonant(25, 1.0, 1.0, 10.0).unwrap();
    c.bench_function("lambda_resonant_u", |b| b.iter(|| lambda_resonant_u(black_box(&lp), black_box(3.7))));
    c.bench_function("cubic_roots", |b| b.iter(|| cubic_roots(black_box(-1.03), black_box(0.02), black_box(-1e-4))));
}

fn trajectories(c: &mut Criterion) {
    let grid = uniform_grid(0.0, 100.0, 2001);
    let p = fig2_params(25);
    c.bench_function("fig2_lindblad_n25", |b| {
        b.iter(|| simulate_collective_decay(black_box(&p), GammaScaling::Single, &grid, LindbladOptions::default()))
    });
    let times = uniform_grid(0.0, 100.0, 20001);
    let lp = fig5_params(25);
    let u2 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    c.bench_function("fig5_nonresonant_n25", |b| b.iter(|| lambda_nonresonant_exact(black_box(&lp), u2, &times)));
}

criterion_group!(benches, eig, closed_forms, trajectories);
criterion_main!(benches);
