use std::hint::black_box;
use std::time::Duration;

use baker_kit::algebraic::build_constants;
use baker_kit::pipeline::{prove_main, round1_instance, tau};
use baker_kit::reduction::dp_reduce;
use baker_kit::search::find_products;
use baker_kit::{Ball, ContinuedFraction, PrecisionPolicy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

fn elementary(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball");
    for prec in [192u32, 768, 3072] {
        let x = Ball::from_decimal_str("1.4655712318767680266567312252199391", prec).unwrap();
        group.bench_with_input(BenchmarkId::new("log", prec), &x, |b, x| {
            b.iter(|| black_box(x).log().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exp", prec), &x, |b, x| {
            b.iter(|| black_box(x).exp().unwrap())
        });
    }
    group.finish();
}

fn constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("constants");
    for prec in [192u32, 384, 768] {
        group.bench_function(BenchmarkId::from_parameter(prec), |b| {
            b.iter(|| build_constants(black_box(prec)).unwrap())
        });
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let table = build_constants(384).unwrap();
    let t = tau(&table).unwrap();
    c.bench_function("cf_tau_384", |b| {
        b.iter(|| ContinuedFraction::expand(black_box(&t), usize::MAX))
    });
    let cf = ContinuedFraction::expand(&t, usize::MAX);
    let m: BigInt = "2864000000000000000000000000000000".parse().unwrap();
    let inst = round1_instance(&table, m).unwrap();
    c.bench_function("reduce_round1", |b| {
        b.iter(|| dp_reduce(black_box(&inst), black_box(&cf)))
    });
}

fn search(c: &mut Criterion) {
    c.bench_function("search_438_86_174", |b| {
        b.iter(|| find_products(black_box(438), 86, 174, false))
    });
}

fn prove(c: &mut Criterion) {
    let mut group = c.benchmark_group("prove");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(40));
    group.bench_function("default_policy", |b| {
        b.iter(|| prove_main(&PrecisionPolicy::default()))
    });
    group.finish();
}

criterion_group!(benches, elementary, constants, reduction, search, prove);
criterion_main!(benches);
