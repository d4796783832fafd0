use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gme_core::closed_forms::ghzw_pure_lambda;
use gme_core::convexify::{lower_envelope_2d, symmetric_mixture_entanglement};
use gme_core::ghz_w_family::{e_psi_surface, surgery};
use gme_core::hartree::entanglement_eigenvalue;
use gme_core::states::{ghz, symmetric_state, w_state};
use gme_core::SolverOptions;

fn hopm(c: &mut Criterion) {
    let opts = SolverOptions {
        restarts: 4,
        ..SolverOptions::default()
    };
    let w = w_state();
    let ghz8 = ghz(8).unwrap();
    let s62 = symmetric_state(6, 2).unwrap();
    let mut g = c.benchmark_group("hopm");
    g.bench_function("w", |b| b.iter(|| entanglement_eigenvalue(black_box(&w), &opts).unwrap()));
    g.bench_function("ghz_8", |b| b.iter(|| entanglement_eigenvalue(black_box(&ghz8), &opts).unwrap()));
    g.bench_function("s_6_2", |b| b.iter(|| entanglement_eigenvalue(black_box(&s62), &opts).unwrap()));
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    c.bench_function("ghzw_cubic", |b| b.iter(|| ghzw_pure_lambda(black_box(0.3), black_box(0.4)).unwrap()));
}

fn convex_hulls(c: &mut Criterion) {
    let surface = e_psi_surface(101).unwrap();
    let mut g = c.benchmark_group("convexify");
    g.sample_size(10);
    g.bench_function("lower_envelope_2d_101", |b| b.iter(|| lower_envelope_2d(black_box(&surface)).unwrap()));
    g.bench_function("surgery_101", |b| b.iter(|| surgery(101, 1).unwrap()));
    g.bench_function("symmetric_mixture_3", |b| {
        b.iter(|| symmetric_mixture_entanglement(3, black_box(&[0.0, 0.5, 0.3, 0.2])).unwrap())
    });
    g.finish();
}

criterion_group!(benches, hopm, closed_forms, convex_hulls);
criterion_main!(benches);
