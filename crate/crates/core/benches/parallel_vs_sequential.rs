use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dskv_core::dshuffle::{constraint_system, ds_basis_with, f3, DsConfig, StuffleForm};
use dskv_core::group::{exp_odot, group_shuffle_check_with};
use dskv_core::par::Strategy;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn rows(c: &mut Criterion) {
    let mut g = c.benchmark_group("constraint_rows");
    g.sample_size(10);
    for n in [8, 10] {
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| constraint_system(black_box(n), StuffleForm::Exclusion, s).unwrap())
            });
        }
    }
    g.finish();
}

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("ds_basis");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        let cfg = DsConfig { strategy: s, ..DsConfig::default() };
        g.bench_function(BenchmarkId::new(name, 10), |b| b.iter(|| ds_basis_with(black_box(10), &cfg).unwrap()));
    }
    g.finish();
}

fn group_pairs(c: &mut Criterion) {
    let phi = exp_odot(&f3(), 9).unwrap();
    let mut g = c.benchmark_group("shuffle_pairs_n9");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| group_shuffle_check_with(black_box(&phi), s)));
    }
    g.finish();
}

criterion_group!(benches, rows, basis, group_pairs);
criterion_main!(benches);
