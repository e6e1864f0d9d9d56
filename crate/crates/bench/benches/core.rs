use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use ssurv_bench::synthetic;
use ssurv_core::{c_index, log_rank_statistic, nelson_aalen, Forest, ForestConfig, SupervisionStatus};

fn bench_nelson_aalen(c: &mut Criterion) {
    let data = synthetic(500, 1, 1);
    c.bench_function("nelson_aalen/500", |b| {
        b.iter(|| nelson_aalen(black_box(&data.records)).unwrap())
    });
}

fn bench_log_rank(c: &mut Criterion) {
    let left = synthetic(250, 1, 2).records;
    let right = synthetic(250, 1, 3).records;
    c.bench_function("log_rank/250v250", |b| {
        b.iter(|| log_rank_statistic(black_box(&left), black_box(&right)).unwrap())
    });
}

fn bench_c_index(c: &mut Criterion) {
    let subjects: Vec<(f64, SupervisionStatus, f64)> = synthetic(400, 1, 4)
        .records
        .into_iter()
        .map(|r| (r.time, r.status, r.features[0]))
        .collect();
    c.bench_function("c_index/400", |b| {
        b.iter(|| c_index(black_box(&subjects)).unwrap())
    });
}

fn bench_forest_fit(c: &mut Criterion) {
    let data = synthetic(200, 6, 5);
    let config = ForestConfig { n_trees: 50, ..ForestConfig::default() };
    c.bench_function("forest_fit/200x6x50", |b| {
        b.iter_batched(
            || (data.clone(), config.clone()),
            |(d, cfg)| Forest::fit(&d, &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_predict(c: &mut Criterion) {
    let data = synthetic(200, 6, 6);
    let config = ForestConfig { n_trees: 50, ..ForestConfig::default() };
    let forest = Forest::fit(&data, &config).unwrap();
    let x = &data.records[0].features;
    c.bench_function("predict_with_variance/50trees", |b| {
        b.iter(|| forest.predict_with_variance(black_box(x), 0.0).unwrap())
    });
}

criterion_group!(
    benches,
    bench_nelson_aalen,
    bench_log_rank,
    bench_c_index,
    bench_forest_fit,
    bench_predict
);
criterion_main!(benches);
