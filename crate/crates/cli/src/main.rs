//! Command-line front end: dataset synthesis, training, attribution dumps,
//! benchmark grids, recursive feature elimination, and external CSV
//! ingestion.
//!
//! Every command exits 0 on success; on failure it prints one JSON error
//! line to stderr and exits nonzero.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use attrbench_core::rng::derive_seed;
use attrbench_core::{
    attribute_model, fprec, generate_dataset, load_tabular_csv, rfe_linear, rfewna, run_grid,
    topk_features, validation_metrics, AttributionMethod, Balance, Explainer, FeatureDist,
    GridConfig, LossKind, MetricRecord, MlpModel, NoiseSpec, OptimizerKind, RfeConfig, RfeResult,
    Scaling, Strategy, SymbolicFunction, TabularDataset, Task, TrainConfig,
};

#[derive(Parser)]
#[command(name = "attrbench", version, about = "Attribution benchmark engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a dataset from a generator function.
    Generate(GenerateArgs),
    /// Train a network on a saved dataset and write a checkpoint.
    Train(TrainArgs),
    /// Dump per-sample attributions of a checkpointed model to CSV.
    Attribute(AttributeArgs),
    /// Run a benchmark sweep from a JSON config.
    Grid(GridArgs),
    /// Run recursive feature elimination.
    Rfe(RfeArgs),
    /// Ingest an external CSV into the dataset format.
    Ingest(IngestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    StdNormal,
    ClippedNormal,
}

impl From<DistArg> for FeatureDist {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::StdNormal => FeatureDist::StdNormal,
            DistArg::ClippedNormal => FeatureDist::ClippedNormal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizerArg {
    Sgd,
    Adam,
}

impl From<OptimizerArg> for OptimizerKind {
    fn from(o: OptimizerArg) -> Self {
        match o {
            OptimizerArg::Sgd => OptimizerKind::Sgd,
            OptimizerArg::Adam => OptimizerKind::Adam,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LossArg {
    Mse,
    Bce,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Mse => LossKind::Mse,
            LossArg::Bce => LossKind::Bce,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator function id, 1..=15.
    #[arg(long)]
    function: u8,
    /// Number of irrelevant noise features.
    #[arg(long, default_value_t = 100)]
    n_noise: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = DistArg::ClippedNormal)]
    dist: DistArg,
    /// Standard deviation of additive Gaussian label noise.
    #[arg(long, default_value_t = 0.01)]
    label_noise: f64,
    /// Train fraction.
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; the JSON sidecar lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset CSV (with sidecar) written by `generate` or `ingest`.
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated hidden widths, e.g. 100,100,100.
    #[arg(long, default_value = "100,100,100", value_delimiter = ',')]
    hidden: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    dropout: f64,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Adam)]
    optimizer: OptimizerArg,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 1000)]
    epochs: usize,
    #[arg(long, default_value_t = 128)]
    batch: usize,
    #[arg(long, value_enum, default_value_t = LossArg::Mse)]
    loss: LossArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoint output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttributeArgs {
    #[arg(long)]
    data: PathBuf,
    /// Model checkpoint from `train`.
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated subset of sa,ig,dl,fa.
    #[arg(long, default_value = "sa,ig,dl,fa", value_delimiter = ',')]
    methods: Vec<String>,
    /// Which rows to attribute.
    #[arg(long, default_value = "validation")]
    rows: String,
    #[arg(long, default_value_t = 10)]
    ig_steps: usize,
    /// Output CSV of (sample_id, method, feature_index, value).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    /// Grid config JSON; missing fields take the standard-setup defaults.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's worker count.
    #[arg(long)]
    workers: Option<usize>,
    /// Override the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the config's seed list with a single seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RfeArgs {
    #[arg(long)]
    data: PathBuf,
    /// sa, ig, dl, fa, or coef for the linear baseline.
    #[arg(long)]
    explainer: String,
    /// Fraction of the selected set dropped per round.
    #[arg(long, default_value_t = 0.5)]
    dr: f64,
    /// Target number of features.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "uni")]
    strategy: String,
    #[arg(long, default_value = "100,100,100", value_delimiter = ',')]
    hidden: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    dropout: f64,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Adam)]
    optimizer: OptimizerArg,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    /// Epochs per elimination round.
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, default_value_t = 128)]
    batch: usize,
    #[arg(long, value_enum, default_value_t = LossArg::Mse)]
    loss: LossArg,
    #[arg(long, default_value_t = 10)]
    ig_steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output stem: writes <out>.json (trajectory) and <out>.csv (summary).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    /// External CSV with a header row and a label column.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    label_column: String,
    #[arg(long, default_value = "minmax")]
    scaling: String,
    #[arg(long, default_value = "none")]
    balance: String,
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path in the dataset format.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{err:#}") }));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Train(args) => train_cmd(args),
        Command::Attribute(args) => attribute(args),
        Command::Grid(args) => grid(args),
        Command::Rfe(args) => rfe(args),
        Command::Ingest(args) => ingest(args),
    }
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let func = SymbolicFunction::new(args.function)?;
    let spec = NoiseSpec {
        n_noise: args.n_noise,
        feature_dist: args.dist.into(),
        label_noise_std: args.label_noise,
        seed: args.seed,
    };
    let ds = generate_dataset(func, &spec, args.samples, args.split)?;
    ds.save(&args.out)?;
    println!(
        "{}",
        serde_json::json!({
            "dataset": args.out,
            "rows": ds.n_rows(),
            "features": ds.n_cols(),
            "predictive_indices": ds.predictive_indices(),
        })
    );
    Ok(())
}

fn model_widths(n_inputs: usize, hidden: &[usize]) -> Vec<usize> {
    let mut widths = vec![n_inputs];
    widths.extend_from_slice(hidden);
    widths.push(1);
    widths
}

fn train_cmd(args: TrainArgs) -> anyhow::Result<()> {
    let ds = TabularDataset::load(&args.data)?;
    let widths = model_widths(ds.n_cols(), &args.hidden);
    let mut model = MlpModel::new(&widths, args.dropout, derive_seed(args.seed, 1))?;
    let cfg = TrainConfig {
        optimizer: args.optimizer.into(),
        learning_rate: args.lr,
        epochs: args.epochs,
        batch_size: args.batch,
        loss: args.loss.into(),
        seed: derive_seed(args.seed, 2),
        record_attribution_every: None,
    };
    let report = attrbench_core::train(&mut model, &ds, &cfg)?;
    let task = match cfg.loss {
        LossKind::Mse => Task::Regression,
        LossKind::Bce => Task::Classification,
    };
    let metrics = validation_metrics(&model, &ds, task)?;
    if let Some(out) = &args.out {
        model.save_checkpoint(out)?;
    }
    println!(
        "{}",
        serde_json::json!({
            "final_train_loss": report.per_epoch_loss.last(),
            "validation": metric_map(&metrics),
            "wall_time_s": report.wall_time_s,
            "checkpoint": args.out,
        })
    );
    Ok(())
}

fn metric_map(records: &[MetricRecord]) -> serde_json::Map<String, serde_json::Value> {
    records
        .iter()
        .map(|r| (r.name.clone(), serde_json::json!(r.value)))
        .collect()
}

fn attribute(args: AttributeArgs) -> anyhow::Result<()> {
    let ds = TabularDataset::load(&args.data)?;
    let model = MlpModel::load_checkpoint(&args.model)?;
    let methods: Vec<AttributionMethod> = args
        .methods
        .iter()
        .map(|m| m.parse())
        .collect::<Result<_, _>>()?;
    let rows: Vec<usize> = match args.rows.as_str() {
        "validation" => ds.validation_indices(),
        "train" => ds.train_indices(),
        "all" => (0..ds.n_rows()).collect(),
        other => bail!("--rows must be validation|train|all, got {other:?}"),
    };

    let mut w = BufWriter::new(File::create(&args.out)?);
    writeln!(w, "sample_id,method,feature_index,value")?;
    let mut mean_abs: Vec<Vec<f64>> = vec![vec![0.0; ds.n_cols()]; methods.len()];
    for &r in &rows {
        for (mi, &method) in methods.iter().enumerate() {
            let a = attribute_model(&model, method, ds.row(r), 0, args.ig_steps)?;
            for (i, v) in a.values.iter().enumerate() {
                writeln!(w, "{r},{method},{i},{v}")?;
                mean_abs[mi][i] += v.abs();
            }
        }
    }
    w.flush()?;

    // Summarize recovery against the annotation when one exists.
    let mut summary = serde_json::Map::new();
    let annotated = ds.predictive_indices();
    if !annotated.is_empty() && !rows.is_empty() {
        for (mi, &method) in methods.iter().enumerate() {
            let values: Vec<f64> = mean_abs[mi].iter().map(|v| v / rows.len() as f64).collect();
            let holder = attrbench_core::AttributionVector {
                values,
                method,
                target_index: 0,
                baseline: attrbench_core::Baseline::Zeros,
            };
            let top = topk_features(&holder, annotated.len())?;
            summary.insert(method.to_string(), serde_json::json!(fprec(&top, annotated)?));
        }
    }
    println!(
        "{}",
        serde_json::json!({
            "dump": args.out,
            "rows": rows.len(),
            "fprec": summary,
        })
    );
    Ok(())
}

fn grid(args: GridArgs) -> anyhow::Result<()> {
    let file = File::open(&args.config)
        .with_context(|| format!("opening {}", args.config.display()))?;
    let mut cfg: GridConfig = serde_json::from_reader(file)?;
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = args.seed {
        cfg.seeds = vec![seed];
    }
    println!("planned executions: {}", cfg.planned_executions());
    let outcome = run_grid(&cfg)?;
    println!(
        "{}",
        serde_json::json!({
            "results": outcome.results_csv,
            "timings": outcome.timings_csv,
            "failed_executions": outcome.failed_executions,
        })
    );
    Ok(())
}

fn rfe(args: RfeArgs) -> anyhow::Result<()> {
    let ds = TabularDataset::load(&args.data)?;
    let explainer: Explainer = args.explainer.parse()?;
    let strategy = match args.strategy.as_str() {
        "uni" => Strategy::Uni,
        "bi" => Strategy::Bi,
        other => bail!("--strategy must be uni|bi, got {other:?}"),
    };
    let cfg = RfeConfig {
        drop_rate: args.dr,
        target_k: args.k,
        explainer,
        strategy,
        inner_train: TrainConfig {
            optimizer: args.optimizer.into(),
            learning_rate: args.lr,
            epochs: args.epochs,
            batch_size: args.batch,
            loss: args.loss.into(),
            seed: 0,
            record_attribution_every: None,
        },
        hidden_widths: args.hidden.clone(),
        dropout_rate: args.dropout,
        ig_steps: args.ig_steps,
        seed: args.seed,
    };
    let result = match explainer {
        Explainer::Coef => rfe_linear(&ds, &cfg)?,
        Explainer::Attribution(_) => rfewna(&ds, &cfg)?,
    };

    let json_path = args.out.with_extension("json");
    serde_json::to_writer_pretty(BufWriter::new(File::create(&json_path)?), &result)?;
    let csv_path = args.out.with_extension("csv");
    write_rfe_summary(&csv_path, &result)?;

    let annotated = ds.predictive_indices();
    let final_fprec = if annotated.len() == result.final_selected.len() {
        Some(fprec(&result.final_selected, annotated)?)
    } else {
        None
    };
    println!(
        "{}",
        serde_json::json!({
            "trajectory": json_path,
            "summary": csv_path,
            "final_selected": result.final_selected,
            "final_metrics": metric_map(&result.final_model_metrics),
            "final_fprec": final_fprec,
        })
    );
    Ok(())
}

fn write_rfe_summary(path: &PathBuf, result: &RfeResult) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "phase,iteration,size,metric,value,selected")?;
    for (i, it) in result.iterations.iter().enumerate() {
        for m in &it.validation_metrics {
            writeln!(w, "iteration,{i},{},{},{},", it.size, m.name, m.value)?;
        }
    }
    let selected = result
        .final_selected
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    for m in &result.final_model_metrics {
        writeln!(
            w,
            "final,,{},{},{},{selected}",
            result.final_selected.len(),
            m.name,
            m.value
        )?;
    }
    w.flush()?;
    Ok(())
}

fn ingest(args: IngestArgs) -> anyhow::Result<()> {
    let scaling = match args.scaling.as_str() {
        "minmax" => Scaling::MinMax,
        "none" => Scaling::None,
        other => bail!("--scaling must be minmax|none, got {other:?}"),
    };
    let balance = match args.balance.as_str() {
        "undersample" => Balance::Undersample,
        "none" => Balance::None,
        other => bail!("--balance must be undersample|none, got {other:?}"),
    };
    let ds = load_tabular_csv(
        &args.input,
        scaling,
        balance,
        &args.label_column,
        args.split,
        args.seed,
    )?;
    ds.save(&args.out)?;
    let train_rows = ds
        .train_indices()
        .len();
    let positives = ds.targets().iter().filter(|&&y| y == 1.0).count();
    println!(
        "{}",
        serde_json::json!({
            "dataset": args.out,
            "rows": ds.n_rows(),
            "features": ds.n_cols(),
            "train_rows": train_rows,
            "positive_labels": positives,
        })
    );
    Ok(())
}
