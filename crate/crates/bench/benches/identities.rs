use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tropid_bench::factors;
use tropid_core::{
    fuzz, identity_for_dimension, mat_mul, minimal_power_word, oracle_product, FuzzMode,
    IdentityForm, MatrixClass, SamplerConfig, SearchMode, WordClassSpec,
};

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("product");
    for n in [2, 4, 8] {
        let ms = factors(MatrixClass::UpperTriangular, n, 6, 1);
        group.bench_with_input(BenchmarkId::new("mat_mul", n), &ms, |b, ms| {
            b.iter(|| {
                ms[1..]
                    .iter()
                    .fold(ms[0].clone(), |acc, m| mat_mul(&acc, m).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("digraph", n), &ms, |b, ms| {
            b.iter(|| oracle_product(black_box(ms)).unwrap())
        });
    }
    group.finish();
}

fn fuzzing(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    for dim in [3, 4] {
        let id = identity_for_dimension(dim, IdentityForm::SingleLetter)
            .unwrap()
            .identity;
        let cfg = SamplerConfig::with_seed(2);
        group.bench_function(BenchmarkId::new("diag_pair_100", dim), |b| {
            b.iter(|| {
                fuzz(
                    &id,
                    MatrixClass::UpperTriangular,
                    dim,
                    100,
                    &cfg,
                    FuzzMode::DiagPair,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_word");
    for n in [3, 4, 5] {
        let spec = WordClassSpec::xy(n).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", n), &spec, |b, s| {
            b.iter(|| minimal_power_word(s, SearchMode::Exact).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("greedy", n), &spec, |b, s| {
            b.iter(|| minimal_power_word(s, SearchMode::Greedy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, products, fuzzing, search);
criterion_main!(benches);
