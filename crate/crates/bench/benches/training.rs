//! Forward, gradient, and epoch throughput of the network core.

use std::hint::black_box;

use attrbench_bench::{standard_dataset, standard_model};
use attrbench_core::{train, TrainConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_passes(c: &mut Criterion) {
    let model = standard_model();
    let data = standard_dataset(64);
    let x = data.row(0).to_vec();

    c.bench_function("forward_eval", |b| {
        b.iter(|| black_box(&model).forward_eval(black_box(&x)).unwrap())
    });
    c.bench_function("input_gradient", |b| {
        b.iter(|| black_box(&model).input_gradient(black_box(&x), 0).unwrap())
    });
}

fn bench_epoch(c: &mut Criterion) {
    let data = standard_dataset(512);
    c.bench_function("train_one_epoch_512_rows", |b| {
        b.iter_batched(
            standard_model,
            |mut model| {
                let cfg = TrainConfig {
                    epochs: 1,
                    seed: 3,
                    ..TrainConfig::default()
                };
                train(&mut model, &data, &cfg).unwrap()
            },
            criterion::BatchSize::LargeInput,
        )
    });
}

criterion_group!(benches, bench_passes, bench_epoch);
criterion_main!(benches);
