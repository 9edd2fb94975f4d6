use axoball_core::moment_matrix::{build_f_with, build_g_with};
use axoball_core::oracle::collocation_solve_with;
use axoball_core::{analyze, PotentialSpec, Rational, Strategy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn spec(degree: usize) -> PotentialSpec {
    let b = (0..=degree)
        .map(|k| Rational::new(k as i64 % 7 - 3, k as i64 + 1))
        .collect();
    PotentialSpec::new(Rational::new(3, 2), b).unwrap()
}

fn matrices(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_build");
    group.sample_size(10);
    for order in [40, 120] {
        for (name, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(format!("F/{name}"), order), &order, |b, &n| {
                b.iter(|| build_f_with(black_box(n), strategy))
            });
            group.bench_with_input(BenchmarkId::new(format!("G/{name}"), order), &order, |b, &n| {
                b.iter(|| build_g_with(black_box(n), strategy))
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("matrix_product");
    group.sample_size(10);
    let order = 60;
    let f = build_f_with(order, Strategy::Parallel);
    let g = build_g_with(order, Strategy::Parallel);
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::new(format!("FG/{name}"), order), |b| {
            b.iter(|| f.mul_with(black_box(&g), strategy))
        });
    }
    group.finish();
}

fn physics(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    group.sample_size(10);
    let s = spec(20);
    let moments: Vec<usize> = (0..=40).collect();
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "deg20_m40"), |b| {
            b.iter(|| analyze(black_box(&s), &moments, strategy))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("collocation");
    group.sample_size(10);
    let s = spec(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "deg10_pts32"), |b| {
            b.iter(|| collocation_solve_with(black_box(&s), 32, strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matrices, physics);
criterion_main!(benches);
