//! Parallel-vs-sequential comparison on the two embarrassingly parallel
//! kernels: the f_p(n) violation sweep and batched additivity certificates.
//!
//! With `--no-default-features` the "parallel" case degrades to the same
//! sequential loop, so the two series coincide; with the default `parallel`
//! feature the gap is the rayon speedup.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qadd_core::certify::{additivity_check, violation_integral, SearchOptions};
use qadd_core::divergence::DivergenceSpec;
use qadd_core::exec;
use qadd_core::opcore::DensityState;
use qadd_core::sets::ConvexSetSpec;

fn fpn_tasks() -> Vec<(f64, usize)> {
    [0.70, 0.72, 0.74]
        .iter()
        .flat_map(|&p| (1..=24).map(move |n| (p, n)))
        .collect()
}

fn bench_fpn_sweep(c: &mut Criterion) {
    let tasks = fpn_tasks();
    let mut group = c.benchmark_group("fpn_sweep");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            exec::map_indices(tasks.len(), |i| {
                let (p, n) = tasks[i];
                violation_integral(black_box(p), black_box(n)).unwrap().0
            })
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            exec::map_indices_seq(tasks.len(), |i| {
                let (p, n) = tasks[i];
                violation_integral(black_box(p), black_box(n)).unwrap().0
            })
        })
    });
    group.finish();
}

fn bench_certificate_batch(c: &mut Criterion) {
    let rho = DensityState::plus_state();
    let lambdas: Vec<f64> = (1..=12).map(|i| 0.05 * i as f64).collect();
    let run = |lambda: f64| {
        let set = ConvexSetSpec::av_qubit(lambda).unwrap();
        additivity_check(&rho, &set, &DivergenceSpec::umegaki(), &SearchOptions::default())
            .unwrap()
            .sup_value
    };
    let mut group = c.benchmark_group("certificate_batch");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| exec::map_indices(lambdas.len(), |i| run(black_box(lambdas[i]))))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| exec::map_indices_seq(lambdas.len(), |i| run(black_box(lambdas[i]))))
    });
    group.finish();
}

criterion_group!(benches, bench_fpn_sweep, bench_certificate_batch);
criterion_main!(benches);
