//! Configuration-driven benchmark grid over
//! (model configuration x attribution method x noise condition).
//!
//! Every (cell, seed) execution synthesizes its dataset, trains a fresh
//! regressor, runs the requested attribution methods over the validation
//! split, and scores them. Per-cell seeds are derived by hashing the listed
//! seed with the canonical cell key, so results are byte-identical across
//! runs and independent of worker count and execution order. Wall-clock
//! timings go to a separate file to keep the results CSV deterministic.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attribution::{attribute_model, topk_features, AttributionMethod, AttributionVector};
use crate::dataset::{generate_dataset, FeatureDist, NoiseSpec, TabularDataset};
use crate::error::{Error, Result};
use crate::metrics::{consistency, convergence_auc, fprec, validation_metrics, Task};
use crate::nn::{train_with_observer, LossKind, MlpModel, OptimizerKind, TrainConfig};
use crate::rng::{derive_seed, derive_seed_from_key};
use crate::symfunc::SymbolicFunction;

/// Results CSV schema tag, written as a leading comment line.
pub const RESULTS_SCHEMA: &str = "attrbench-results v1";

/// One point on the noise-condition axis. The dataset seed is derived per
/// cell, so it is not part of the condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseCondition {
    pub n_noise: usize,
    #[serde(default)]
    pub feature_dist: FeatureDist,
    pub label_noise_std: f64,
}

/// Metric names the grid can emit.
pub const KNOWN_METRICS: [&str; 5] = ["uscore", "mae", "fprec", "consistency", "convergence_auc"];

/// The full sweep description. Defaults reproduce the standard setup:
/// 10,000 samples, 4:1 split, 100 noise features, label noise 0.01, width
/// 100, depth 3, Adam at 0.001, no dropout, 1000 epochs of squared error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub function_ids: Vec<u8>,
    pub noise_conditions: Vec<NoiseCondition>,
    pub widths: Vec<usize>,
    pub depths: Vec<usize>,
    pub learning_rates: Vec<f64>,
    pub dropout_rates: Vec<f64>,
    pub attribution_methods: Vec<AttributionMethod>,
    pub metrics: Vec<String>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub n_samples: usize,
    pub split_ratio: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: OptimizerKind,
    pub ig_steps: usize,
    /// Epoch stride for precision curves; required by `convergence_auc`.
    pub record_attribution_every: Option<usize>,
    /// Worker threads; cells are independent jobs.
    pub workers: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            function_ids: vec![2],
            noise_conditions: vec![NoiseCondition {
                n_noise: 100,
                feature_dist: FeatureDist::default(),
                label_noise_std: 0.01,
            }],
            widths: vec![100],
            depths: vec![3],
            learning_rates: vec![1e-3],
            dropout_rates: vec![0.0],
            attribution_methods: AttributionMethod::ALL.to_vec(),
            metrics: vec!["uscore".into(), "fprec".into()],
            seeds: vec![0, 1, 2, 3, 4],
            output_dir: PathBuf::from("grid-out"),
            n_samples: 10_000,
            split_ratio: 0.8,
            epochs: 1000,
            batch_size: 128,
            optimizer: OptimizerKind::Adam,
            ig_steps: 10,
            record_attribution_every: None,
            workers: 1,
        }
    }
}

impl GridConfig {
    fn validate(&self) -> Result<()> {
        let axis = |name: &str, empty: bool| {
            if empty {
                Err(Error::InvalidConfig(format!("{name} must be nonempty")))
            } else {
                Ok(())
            }
        };
        axis("function_ids", self.function_ids.is_empty())?;
        axis("noise_conditions", self.noise_conditions.is_empty())?;
        axis("widths", self.widths.is_empty())?;
        axis("depths", self.depths.is_empty())?;
        axis("learning_rates", self.learning_rates.is_empty())?;
        axis("dropout_rates", self.dropout_rates.is_empty())?;
        axis("attribution_methods", self.attribution_methods.is_empty())?;
        axis("metrics", self.metrics.is_empty())?;
        axis("seeds", self.seeds.is_empty())?;
        for id in &self.function_ids {
            SymbolicFunction::new(*id)?;
        }
        for m in &self.metrics {
            if !KNOWN_METRICS.contains(&m.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "metrics: unknown metric {m:?}, expected one of {KNOWN_METRICS:?}"
                )));
            }
        }
        if self.wants("convergence_auc") && self.record_attribution_every.is_none() {
            return Err(Error::InvalidConfig(
                "record_attribution_every: required when convergence_auc is requested".into(),
            ));
        }
        if self.n_samples < 2 {
            return Err(Error::InvalidConfig("n_samples must be >= 2".into()));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "split_ratio must lie in (0, 1), got {}",
                self.split_ratio
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.ig_steps == 0 {
            return Err(Error::InvalidConfig("ig_steps must be >= 1".into()));
        }
        Ok(())
    }

    fn wants(&self, metric: &str) -> bool {
        self.metrics.iter().any(|m| m == metric)
    }

    /// All grid cells in canonical order.
    fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &function_id in &self.function_ids {
            for noise in &self.noise_conditions {
                for &width in &self.widths {
                    for &depth in &self.depths {
                        for &learning_rate in &self.learning_rates {
                            for &dropout_rate in &self.dropout_rates {
                                cells.push(Cell {
                                    function_id,
                                    noise: noise.clone(),
                                    width,
                                    depth,
                                    learning_rate,
                                    dropout_rate,
                                });
                            }
                        }
                    }
                }
            }
        }
        cells
    }

    /// Total (cell, method, seed) executions the sweep will perform,
    /// reported before running.
    pub fn planned_executions(&self) -> usize {
        self.function_ids.len()
            * self.noise_conditions.len()
            * self.widths.len()
            * self.depths.len()
            * self.learning_rates.len()
            * self.dropout_rates.len()
            * self.attribution_methods.len()
            * self.seeds.len()
    }
}

/// One sweep cell: every axis value except method and seed.
#[derive(Debug, Clone, PartialEq)]
struct Cell {
    function_id: u8,
    noise: NoiseCondition,
    width: usize,
    depth: usize,
    learning_rate: f64,
    dropout_rate: f64,
}

impl Cell {
    /// Canonical key; feeds seed derivation and row sorting.
    fn key(&self) -> String {
        format!(
            "fid={}|noise={}:{}:{}|w={}|d={}|lr={}|do={}",
            self.function_id,
            match self.noise.feature_dist {
                FeatureDist::StdNormal => "std_normal",
                FeatureDist::ClippedNormal => "clipped_normal",
            },
            self.noise.n_noise,
            self.noise.label_noise_std,
            self.width,
            self.depth,
            self.learning_rate,
            self.dropout_rate,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Failed,
}

/// One long-form result row. Config tags reconstruct the exact cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub cell_key: String,
    pub function_id: u8,
    pub n_noise: usize,
    pub feature_dist: FeatureDist,
    pub label_noise_std: f64,
    pub width: usize,
    pub depth: usize,
    pub learning_rate: f64,
    pub dropout_rate: f64,
    pub n_samples: usize,
    pub split_ratio: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: OptimizerKind,
    pub ig_steps: usize,
    pub seed: u64,
    /// Empty for model-level metrics such as uscore.
    pub method: Option<AttributionMethod>,
    pub metric: String,
    /// Empty on failed rows.
    pub value: Option<f64>,
    pub status: RowStatus,
}

/// Where a sweep landed on disk.
#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub results_csv: PathBuf,
    pub timings_csv: PathBuf,
    pub planned_executions: usize,
    pub failed_executions: usize,
}

/// Runs the sweep and writes `results.csv`, `timings.csv`, and a resolved
/// `config.json` echo under the output directory.
pub fn run_grid(cfg: &GridConfig) -> Result<GridOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    serde_json::to_writer_pretty(
        BufWriter::new(File::create(cfg.output_dir.join("config.json"))?),
        cfg,
    )?;

    let cells = cfg.cells();
    let mut jobs = Vec::new();
    for cell in &cells {
        for &seed in &cfg.seeds {
            jobs.push((cell.clone(), seed));
        }
    }

    let run_job = |(cell, seed): &(Cell, u64)| -> (Vec<ResultRow>, f64, bool) {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            execute_cell(cfg, cell, *seed)
        }));
        let elapsed = started.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(rows)) => (rows, elapsed, false),
            Ok(Err(_)) | Err(_) => (vec![failed_row(cfg, cell, *seed)], elapsed, true),
        }
    };

    let executed: Vec<(Vec<ResultRow>, f64, bool)> = if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("workers: {e}")))?;
        pool.install(|| jobs.par_iter().map(run_job).collect())
    } else {
        jobs.iter().map(run_job).collect()
    };

    let mut rows = Vec::new();
    let mut timings = Vec::new();
    let mut failed = 0;
    for (job, (mut job_rows, elapsed, job_failed)) in jobs.iter().zip(executed) {
        timings.push((job.0.key(), job.1, elapsed));
        failed += usize::from(job_failed);
        rows.append(&mut job_rows);
    }

    rows.sort_by(|a, b| {
        (&a.cell_key, a.seed, a.method.map(AttributionMethod::as_str), &a.metric).cmp(&(
            &b.cell_key,
            b.seed,
            b.method.map(AttributionMethod::as_str),
            &b.metric,
        ))
    });
    timings.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));

    let results_csv = cfg.output_dir.join("results.csv");
    write_results(&results_csv, &rows)?;

    let timings_csv = cfg.output_dir.join("timings.csv");
    let mut tw = BufWriter::new(File::create(&timings_csv)?);
    writeln!(tw, "cell_key,seed,wall_time_s")?;
    for (key, seed, secs) in &timings {
        writeln!(tw, "{key},{seed},{secs}")?;
    }
    tw.flush()?;

    Ok(GridOutcome {
        results_csv,
        timings_csv,
        planned_executions: cfg.planned_executions(),
        failed_executions: failed,
    })
}

/// Writes sorted rows with the schema comment line.
pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(file, "# {RESULTS_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn failed_row(cfg: &GridConfig, cell: &Cell, seed: u64) -> ResultRow {
    base_row(cfg, cell, seed, None, "error", None, RowStatus::Failed)
}

fn base_row(
    cfg: &GridConfig,
    cell: &Cell,
    seed: u64,
    method: Option<AttributionMethod>,
    metric: &str,
    value: Option<f64>,
    status: RowStatus,
) -> ResultRow {
    ResultRow {
        cell_key: cell.key(),
        function_id: cell.function_id,
        n_noise: cell.noise.n_noise,
        feature_dist: cell.noise.feature_dist,
        label_noise_std: cell.noise.label_noise_std,
        width: cell.width,
        depth: cell.depth,
        learning_rate: cell.learning_rate,
        dropout_rate: cell.dropout_rate,
        n_samples: cfg.n_samples,
        split_ratio: cfg.split_ratio,
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        optimizer: cfg.optimizer,
        ig_steps: cfg.ig_steps,
        seed,
        method,
        metric: metric.to_string(),
        value,
        status,
    }
}

/// Mean absolute attribution per feature over the validation rows.
fn mean_abs_attribution(
    model: &MlpModel,
    data: &TabularDataset,
    method: AttributionMethod,
    ig_steps: usize,
) -> Result<(Vec<AttributionVector>, AttributionVector)> {
    let rows = data.validation_indices();
    if rows.is_empty() {
        return Err(Error::EmptyData("no validation rows to attribute".into()));
    }
    let mut per_sample = Vec::with_capacity(rows.len());
    let mut mean = vec![0.0; data.n_cols()];
    for &r in &rows {
        let a = attribute_model(model, method, data.row(r), 0, ig_steps)?;
        for (m, v) in mean.iter_mut().zip(&a.values) {
            *m += v.abs();
        }
        per_sample.push(a);
    }
    for m in &mut mean {
        *m /= rows.len() as f64;
    }
    let mean_vector = AttributionVector {
        values: mean,
        ..per_sample[0].clone()
    };
    Ok((per_sample, mean_vector))
}

/// Precision of a method's dataset-level ranking against the annotation.
fn method_fprec(
    model: &MlpModel,
    data: &TabularDataset,
    method: AttributionMethod,
    ig_steps: usize,
) -> Result<f64> {
    let (_, mean_vector) = mean_abs_attribution(model, data, method, ig_steps)?;
    let k = data.predictive_indices().len();
    let top = topk_features(&mean_vector, k)?;
    fprec(&top, data.predictive_indices())
}

fn execute_cell(cfg: &GridConfig, cell: &Cell, seed: u64) -> Result<Vec<ResultRow>> {
    let eff = derive_seed_from_key(seed, &cell.key());
    let func = SymbolicFunction::new(cell.function_id)?;
    let spec = NoiseSpec {
        n_noise: cell.noise.n_noise,
        feature_dist: cell.noise.feature_dist,
        label_noise_std: cell.noise.label_noise_std,
        seed: derive_seed(eff, 1),
    };
    let data = generate_dataset(func, &spec, cfg.n_samples, cfg.split_ratio)?;

    let mut widths = vec![data.n_cols()];
    widths.extend(std::iter::repeat(cell.width).take(cell.depth));
    widths.push(1);
    let mut model = MlpModel::new(&widths, cell.dropout_rate, derive_seed(eff, 2))?;
    let train_cfg = TrainConfig {
        optimizer: cfg.optimizer,
        learning_rate: cell.learning_rate,
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        loss: LossKind::Mse,
        seed: derive_seed(eff, 3),
        record_attribution_every: cfg.record_attribution_every,
    };

    let record_curves = cfg.wants("convergence_auc");
    let methods = cfg.attribution_methods.clone();
    let report = train_with_observer(&mut model, &data, &train_cfg, |_, snapshot| {
        if !record_curves {
            return None;
        }
        let mut pairs = Vec::new();
        for &method in &methods {
            if let Ok(p) = method_fprec(snapshot, &data, method, cfg.ig_steps) {
                pairs.push((method.as_str().to_string(), p));
            }
        }
        Some(pairs)
    })?;

    let mut rows = Vec::new();
    let scores = validation_metrics(&model, &data, Task::Regression)?;
    if cfg.wants("uscore") {
        let v = scores.iter().find(|r| r.name == "uscore").map(|r| r.value);
        rows.push(base_row(cfg, cell, seed, None, "uscore", v, RowStatus::Ok));
    }
    if cfg.wants("mae") {
        let v = scores.iter().find(|r| r.name == "mae").map(|r| r.value);
        rows.push(base_row(cfg, cell, seed, None, "mae", v, RowStatus::Ok));
    }

    let k = data.predictive_indices().len();
    for &method in &cfg.attribution_methods {
        let needs_samples = cfg.wants("fprec") || cfg.wants("consistency");
        if needs_samples {
            let (per_sample, mean_vector) =
                mean_abs_attribution(&model, &data, method, cfg.ig_steps)?;
            if cfg.wants("fprec") {
                let top = topk_features(&mean_vector, k)?;
                let p = fprec(&top, data.predictive_indices())?;
                rows.push(base_row(cfg, cell, seed, Some(method), "fprec", Some(p), RowStatus::Ok));
            }
            if cfg.wants("consistency") {
                let c = consistency(&per_sample, k)?;
                rows.push(base_row(
                    cfg,
                    cell,
                    seed,
                    Some(method),
                    "consistency",
                    Some(c),
                    RowStatus::Ok,
                ));
            }
        }
        if record_curves {
            if let Some(curves) = &report.per_epoch_fprec {
                if let Some(curve) = curves.get(method.as_str()) {
                    let auc = convergence_auc(curve)?;
                    rows.push(base_row(
                        cfg,
                        cell,
                        seed,
                        Some(method),
                        "convergence_auc",
                        Some(auc),
                        RowStatus::Ok,
                    ));
                }
            }
        }
    }
    Ok(rows)
}
