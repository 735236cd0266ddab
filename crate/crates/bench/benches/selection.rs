use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use featsel_bench::bench_instance;
use featsel_core::selection;

fn selectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("selection");
    group.sample_size(10);
    for &n in &[50usize, 200] {
        let obj = bench_instance(6, n, 42);
        let q = n / 10;
        group.bench_with_input(BenchmarkId::new("greedy", n), &n, |b, _| {
            b.iter(|| selection::greedy(&obj, q).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("stochastic_eps0.1", n), &n, |b, _| {
            b.iter(|| selection::stochastic_greedy(&obj, q, 0.1, 7).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("surrogate", n), &n, |b, _| {
            b.iter(|| selection::surrogate_greedy(&obj, q).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, selectors);
criterion_main!(benches);
