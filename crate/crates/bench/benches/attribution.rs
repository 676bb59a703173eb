//! Per-sample cost of the four attribution methods at the test stage.
//!
//! Expected ordering: saliency (one backward pass) is cheapest, integrated
//! gradients (one backward per path step) is the most expensive, the rescale
//! pass costs about two forwards plus a backward, and ablation costs one
//! forward per feature.

use std::hint::black_box;

use attrbench_bench::{standard_dataset, standard_model};
use attrbench_core::{attribute_model, AttributionMethod};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_methods(c: &mut Criterion) {
    let model = standard_model();
    let data = standard_dataset(64);
    let x = data.row(0).to_vec();

    let mut group = c.benchmark_group("attribution");
    for method in AttributionMethod::ALL {
        group.bench_function(method.as_str(), |b| {
            b.iter(|| attribute_model(black_box(&model), method, black_box(&x), 0, 10).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_methods);
criterion_main!(benches);
