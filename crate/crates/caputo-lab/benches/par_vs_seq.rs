//! Parallel vs sequential witness scans.
//!
//! Run with `cargo bench` (the default `parallel` feature must be on for the
//! comparison to be meaningful; without it both entries measure the same
//! sequential path).

use caputo_lab::counterexample::Construction;
use caputo_lab::frac_kernel::Quadrature;
use caputo_lab::sequence_space::NormFlavor;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn residual_scan(c: &mut Criterion) {
    let construction =
        Construction::standard(0.5, 14, NormFlavor::Euclidean, Quadrature::default()).unwrap();
    let t_end = construction
        .family()
        .schedule()
        .t(construction.family().max_bump_index());
    let samples: Vec<f64> = (0..64).map(|i| t_end * i as f64 / 63.0).collect();
    let mut group = c.benchmark_group("residual_check");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| construction.residual_check(black_box(&samples)).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| construction.residual_check_seq(black_box(&samples)).unwrap())
    });
    group.finish();
}

fn p_scan(c: &mut Criterion) {
    let construction =
        Construction::standard(0.5, 12, NormFlavor::Euclidean, Quadrature::default()).unwrap();
    let mut group = c.benchmark_group("hypothesis_p_scan");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(&construction).hypothesis_p_scan().unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(&construction).hypothesis_p_scan_seq().unwrap())
    });
    group.finish();
}

criterion_group!(benches, residual_scan, p_scan);
criterion_main!(benches);
