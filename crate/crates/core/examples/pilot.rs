//! Scratch pilot for tuning acceptance-run configurations. Not part of the
//! test suite.

use std::time::Instant;

use attrbench_core::*;

fn pilot_headline(batch: usize, label_noise: f64) {
    println!("== headline trend pilot: batch {batch} label-noise {label_noise} ==");
    for seed in 0..5u64 {
        let t0 = Instant::now();
        let spec = NoiseSpec::new(10, label_noise, 1000 + seed);
        let ds = generate_dataset(SymbolicFunction::new(2).unwrap(), &spec, 2000, 0.8).unwrap();
        let mut model = MlpModel::new(&[11, 100, 100, 100, 1], 0.0, 2000 + seed).unwrap();
        let cfg = TrainConfig {
            learning_rate: 1e-3,
            epochs: 300,
            batch_size: batch,
            seed: 3000 + seed,
            ..TrainConfig::default()
        };
        train(&mut model, &ds, &cfg).unwrap();
        let metrics = validation_metrics(&model, &ds, Task::Regression).unwrap();
        let us = metrics.iter().find(|m| m.name == "uscore").unwrap().value;

        let rows = ds.validation_indices();
        let mut mean = vec![0.0; ds.n_cols()];
        for &r in &rows {
            let a = saliency(&model, ds.row(r), 0).unwrap();
            for (m, v) in mean.iter_mut().zip(&a.values) {
                *m += v.abs();
            }
        }
        let holder = AttributionVector {
            values: mean,
            method: AttributionMethod::Sa,
            target_index: 0,
            baseline: Baseline::Zeros,
        };
        let top = topk_features(&holder, 1).unwrap();
        let fp = fprec(&top, ds.predictive_indices()).unwrap();
        println!(
            "seed {seed}: uscore {us:.4} sa-fprec {fp:.2} time {:.1}s",
            t0.elapsed().as_secs_f64()
        );
    }
}

fn pilot_rfe(epochs: usize, hidden: &[usize]) {
    println!("== rfe pilot: epochs {epochs} hidden {hidden:?} ==");
    let mut nn_wins = 0;
    let mut nn_sum = 0.0;
    for seed in 0..5u64 {
        let t0 = Instant::now();
        let spec = NoiseSpec::new(45, 0.01, 500 + seed);
        let ds = generate_dataset(SymbolicFunction::new(10).unwrap(), &spec, 4000, 0.8).unwrap();

        let nn_cfg = RfeConfig {
            drop_rate: 0.5,
            target_k: 5,
            explainer: Explainer::Attribution(AttributionMethod::Sa),
            strategy: Strategy::Uni,
            inner_train: TrainConfig {
                epochs,
                batch_size: 128,
                ..TrainConfig::default()
            },
            hidden_widths: hidden.to_vec(),
            dropout_rate: 0.0,
            ig_steps: 10,
            seed: 700 + seed,
        };
        let nn = rfewna(&ds, &nn_cfg).unwrap();
        let nn_fp = fprec(&nn.final_selected, ds.predictive_indices()).unwrap();

        let lin_cfg = RfeConfig {
            explainer: Explainer::Coef,
            hidden_widths: vec![],
            ..nn_cfg.clone()
        };
        let lin = rfe_linear(&ds, &lin_cfg).unwrap();
        let lin_fp = fprec(&lin.final_selected, ds.predictive_indices()).unwrap();

        nn_sum += nn_fp;
        if nn_fp >= lin_fp {
            nn_wins += 1;
        }
        println!(
            "seed {seed}: nn {nn_fp:.2} linear {lin_fp:.2} time {:.1}s",
            t0.elapsed().as_secs_f64()
        );
    }
    println!("wins {nn_wins}/5, nn mean fprec {:.3}", nn_sum / 5.0);
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_default();
    let arg = |i: usize| std::env::args().nth(i);
    match mode.as_str() {
        "headline" => {
            let batch: usize = arg(2).and_then(|s| s.parse().ok()).unwrap_or(128);
            let noise: f64 = arg(3).and_then(|s| s.parse().ok()).unwrap_or(0.01);
            pilot_headline(batch, noise);
        }
        "rfe" => {
            let epochs: usize = arg(2).and_then(|s| s.parse().ok()).unwrap_or(80);
            let width: usize = arg(3).and_then(|s| s.parse().ok()).unwrap_or(64);
            pilot_rfe(epochs, &[width, width]);
        }
        _ => {
            pilot_headline(128, 0.01);
            pilot_rfe(80, &[64, 64]);
        }
    }
}
