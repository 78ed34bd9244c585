use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use clusternet::metrics::{
    beta_summary, ccdf_bounds, clustering_gain, constrained_capacity, success_probability,
    success_probability_nakagami,
};
use clusternet::{FadingModel, QuadratureSpec};
use clusternet_bench::{matern, thomas};

fn success(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut g = c.benchmark_group("success_probability");
    g.bench_function("thomas", |b| {
        b.iter(|| success_probability(black_box(&thomas()), &spec).unwrap())
    });
    g.bench_function("matern", |b| {
        b.iter(|| success_probability(black_box(&matern()), &spec).unwrap())
    });
    let naka = thomas().with_fading(FadingModel::Nakagami { m: 3, omega: 1.0 });
    g.bench_function("nakagami_m3", |b| {
        b.iter(|| success_probability_nakagami(black_box(&naka), &spec).unwrap())
    });
    g.finish();
}

fn summaries(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    c.bench_function("beta_summary", |b| {
        b.iter(|| beta_summary(black_box(&thomas()), &spec).unwrap())
    });
    c.bench_function("ccdf_bounds", |b| {
        b.iter(|| ccdf_bounds(black_box(&thomas()), 10.0, &spec).unwrap())
    });
    c.bench_function("clustering_gain", |b| {
        b.iter(|| clustering_gain(black_box(&matern()), &spec).unwrap())
    });
    c.bench_function("constrained_capacity", |b| {
        b.iter(|| constrained_capacity(black_box(&thomas()), 0.01, &spec).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = success, summaries
}
criterion_main!(benches);
