//! Recursive feature elimination.
//!
//! The attribution-driven variant trains a fresh network each round, scores
//! feature importance as the mean absolute attribution over the validation
//! split, and drops the least important fraction of the currently selected
//! set until the target count remains. The classic baseline runs the same
//! loop with a linear model, ranking features by absolute coefficient.
//!
//! Each round retrains from scratch so weights attached to dropped columns
//! never linger; per-round seeds derive from the run seed, making the whole
//! trajectory reproducible bit-for-bit.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::attribution::{attribute_model, AttributionMethod};
use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::metrics::{validation_metrics, MetricRecord, Task};
use crate::nn::{train, LossKind, MlpModel, TrainConfig};
use crate::rng::derive_seed;

/// What ranks features inside the elimination loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Explainer {
    /// A post-hoc attribution method on the freshly trained network.
    Attribution(AttributionMethod),
    /// Absolute coefficients of a linear model.
    Coef,
}

impl std::fmt::Display for Explainer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Explainer::Attribution(m) => f.write_str(m.as_str()),
            Explainer::Coef => f.write_str("coef"),
        }
    }
}

impl std::str::FromStr for Explainer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "coef" {
            Ok(Explainer::Coef)
        } else {
            Ok(Explainer::Attribution(s.parse()?))
        }
    }
}

/// Whether the selecting estimator also produces the final metrics, or a
/// fresh network is trained on the final selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Uni,
    Bi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeConfig {
    /// Fraction of the currently selected set dropped per round, in (0, 1).
    pub drop_rate: f64,
    /// Number of features to keep.
    pub target_k: usize,
    pub explainer: Explainer,
    pub strategy: Strategy,
    /// Training configuration for each round's fresh estimator. Its seed is
    /// ignored; per-round seeds derive from `seed`.
    pub inner_train: TrainConfig,
    /// Hidden widths of the network estimator (the linear baseline has none).
    pub hidden_widths: Vec<usize>,
    pub dropout_rate: f64,
    /// Path segments for integrated-gradients importance.
    pub ig_steps: usize,
    pub seed: u64,
}

impl RfeConfig {
    fn validate(&self, n_features: usize) -> Result<()> {
        if !(self.drop_rate > 0.0 && self.drop_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "drop_rate must lie in (0, 1), got {}",
                self.drop_rate
            )));
        }
        if self.target_k == 0 {
            return Err(Error::InvalidParameter("target_k must be >= 1".into()));
        }
        if self.target_k > n_features {
            return Err(Error::InvalidParameter(format!(
                "target_k {} exceeds the {} available features",
                self.target_k, n_features
            )));
        }
        Ok(())
    }

    fn task(&self) -> Task {
        match self.inner_train.loss {
            LossKind::Mse => Task::Regression,
            LossKind::Bce => Task::Classification,
        }
    }
}

/// One elimination round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeIteration {
    pub size: usize,
    /// Features selected when this round's estimator was trained (ascending).
    pub selected: Vec<usize>,
    /// Importance aligned with `selected`.
    pub importance: Vec<f64>,
    pub validation_metrics: Vec<MetricRecord>,
    /// Features removed at the end of this round (ascending).
    pub dropped: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeResult {
    pub iterations: Vec<RfeIteration>,
    /// Exactly `target_k` features, ascending.
    pub final_selected: Vec<usize>,
    /// Validation metrics of the estimator trained on the final selection.
    pub final_model_metrics: Vec<MetricRecord>,
    pub wall_time_s: f64,
}

/// Selected-set sizes from `n` down to `target_k`: each step drops
/// `ceil(drop_rate * current)`, clamped to never fall below the target.
pub fn elimination_schedule(n: usize, drop_rate: f64, target_k: usize) -> Result<Vec<usize>> {
    if !(drop_rate > 0.0 && drop_rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "drop_rate must lie in (0, 1), got {drop_rate}"
        )));
    }
    if target_k == 0 || target_k > n {
        return Err(Error::InvalidParameter(format!(
            "target_k must lie in 1..={n}, got {target_k}"
        )));
    }
    let mut sizes = vec![n];
    let mut current = n;
    while current > target_k {
        let drop = ((drop_rate * current as f64).ceil() as usize).min(current - target_k).max(1);
        current -= drop;
        sizes.push(current);
    }
    Ok(sizes)
}

/// Elimination with a network estimator ranked by post-hoc attribution.
pub fn rfewna(data: &TabularDataset, cfg: &RfeConfig) -> Result<RfeResult> {
    match cfg.explainer {
        Explainer::Attribution(_) => run_rfe(data, cfg),
        Explainer::Coef => Err(Error::InvalidParameter(
            "attribution elimination needs explainer sa|ig|dl|fa; use rfe_linear for coef".into(),
        )),
    }
}

/// The classic linear baseline: same loop, importance from coefficients.
pub fn rfe_linear(data: &TabularDataset, cfg: &RfeConfig) -> Result<RfeResult> {
    match cfg.explainer {
        Explainer::Coef => run_rfe(data, cfg),
        Explainer::Attribution(_) => Err(Error::InvalidParameter(
            "the linear baseline requires explainer coef".into(),
        )),
    }
}

fn run_rfe(data: &TabularDataset, cfg: &RfeConfig) -> Result<RfeResult> {
    let start = Instant::now();
    cfg.validate(data.n_cols())?;

    let mut selected: Vec<usize> = (0..data.n_cols()).collect();
    let mut iterations = Vec::new();
    let mut round = 0u64;
    while selected.len() > cfg.target_k {
        let (model, metrics) = fit_round(data, cfg, &selected, round)?;
        let importance = feature_importance(&model, data, cfg, &selected)?;

        let n_drop = ((cfg.drop_rate * selected.len() as f64).ceil() as usize)
            .min(selected.len() - cfg.target_k)
            .max(1);
        // Rank positions by importance descending, ties toward the lower
        // original index; the tail gets dropped.
        let mut order: Vec<usize> = (0..selected.len()).collect();
        order.sort_by(|&p, &q| {
            importance[q]
                .total_cmp(&importance[p])
                .then(selected[p].cmp(&selected[q]))
        });
        let mut dropped: Vec<usize> = order[selected.len() - n_drop..]
            .iter()
            .map(|&p| selected[p])
            .collect();
        dropped.sort_unstable();

        iterations.push(RfeIteration {
            size: selected.len(),
            selected: selected.clone(),
            importance,
            validation_metrics: metrics,
            dropped: dropped.clone(),
        });
        selected.retain(|f| !dropped.contains(f));
        round += 1;
    }

    // Final estimator on the surviving set; the bi-module strategy always
    // rates the selection with a fresh network.
    let final_model_metrics = match (cfg.strategy, cfg.explainer) {
        (Strategy::Bi, Explainer::Coef) => bi_module_eval(
            &selected,
            data,
            &cfg.inner_train,
            &cfg.hidden_widths,
            cfg.dropout_rate,
            derive_seed(cfg.seed, 0xF1A1 + round),
        )?,
        _ => fit_round(data, cfg, &selected, round)?.1,
    };

    Ok(RfeResult {
        iterations,
        final_selected: selected,
        final_model_metrics,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Trains one round's estimator on the selected columns and scores it on the
/// validation split.
fn fit_round(
    data: &TabularDataset,
    cfg: &RfeConfig,
    selected: &[usize],
    round: u64,
) -> Result<(MlpModel, Vec<MetricRecord>)> {
    let restricted = data.restrict_columns(selected)?;
    let widths = estimator_widths(cfg, selected.len());
    let dropout = match cfg.explainer {
        Explainer::Coef => 0.0,
        Explainer::Attribution(_) => cfg.dropout_rate,
    };
    let mut model = MlpModel::new(&widths, dropout, derive_seed(cfg.seed, 2 * round))?;
    let mut train_cfg = cfg.inner_train.clone();
    train_cfg.seed = derive_seed(cfg.seed, 2 * round + 1);
    train(&mut model, &restricted, &train_cfg)?;
    let metrics = validation_metrics(&model, &restricted, cfg.task())?;
    Ok((model, metrics))
}

fn estimator_widths(cfg: &RfeConfig, n_inputs: usize) -> Vec<usize> {
    match cfg.explainer {
        Explainer::Coef => vec![n_inputs, 1],
        Explainer::Attribution(_) => {
            let mut widths = vec![n_inputs];
            widths.extend_from_slice(&cfg.hidden_widths);
            widths.push(1);
            widths
        }
    }
}

/// Importance per selected feature: mean absolute attribution over the
/// validation rows, or the absolute linear coefficient.
fn feature_importance(
    model: &MlpModel,
    data: &TabularDataset,
    cfg: &RfeConfig,
    selected: &[usize],
) -> Result<Vec<f64>> {
    match cfg.explainer {
        Explainer::Coef => Ok(model.param_vector()[..selected.len()]
            .iter()
            .map(|w| w.abs())
            .collect()),
        Explainer::Attribution(method) => {
            let restricted = data.restrict_columns(selected)?;
            let rows = restricted.validation_indices();
            if rows.is_empty() {
                return Err(Error::EmptyData("no validation rows to rank features".into()));
            }
            let mut sums = vec![0.0; selected.len()];
            for &r in &rows {
                let a = attribute_model(model, method, restricted.row(r), 0, cfg.ig_steps)?;
                for (s, v) in sums.iter_mut().zip(&a.values) {
                    *s += v.abs();
                }
            }
            for s in &mut sums {
                *s /= rows.len() as f64;
            }
            Ok(sums)
        }
    }
}

/// Trains a fresh network on the column-restricted dataset and returns its
/// validation metrics. This is the second half of the bi-module strategy and
/// is also useful for scoring any externally chosen feature subset.
pub fn bi_module_eval(
    selected: &[usize],
    data: &TabularDataset,
    inner_train: &TrainConfig,
    hidden_widths: &[usize],
    dropout_rate: f64,
    arch_seed: u64,
) -> Result<Vec<MetricRecord>> {
    if selected.is_empty() {
        return Err(Error::EmptyData("feature selection is empty".into()));
    }
    let restricted = data.restrict_columns(selected)?;
    let mut widths = vec![selected.len()];
    widths.extend_from_slice(hidden_widths);
    widths.push(1);
    let mut model = MlpModel::new(&widths, dropout_rate, arch_seed)?;
    train(&mut model, &restricted, inner_train)?;
    let task = match inner_train.loss {
        LossKind::Mse => Task::Regression,
        LossKind::Bce => Task::Classification,
    };
    validation_metrics(&model, &restricted, task)
}
