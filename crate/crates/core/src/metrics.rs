//! Scoring: the uniform prediction score, functional precision of top-k
//! feature recovery, cross-sample consistency, convergence area, and plain
//! accuracy/MAE.

use serde::{Deserialize, Serialize};

use crate::attribution::{topk_features, AttributionVector};
use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::nn::{sigmoid, MlpModel};

/// Default denominator guard for [`uscore`].
pub const USCORE_EPS: f64 = 1e-8;

/// One named metric value with its context tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub name: String,
    pub value: f64,
    /// (key, value) tags such as function id, method, seed, epoch.
    pub context: Vec<(String, String)>,
}

impl MetricRecord {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            context: Vec::new(),
        }
    }

    pub fn tag(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.context.push((key.into(), value.into()));
        self
    }
}

/// Kind of prediction task, which picks the plain metrics reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
}

/// Scale-free prediction accuracy in `(0, 1]`:
/// `mean_i(1 - |pred_i - target_i| / (|pred_i| + |target_i| + eps))`.
pub fn uscore(preds: &[f64], targets: &[f64], eps: f64) -> Result<f64> {
    if preds.len() != targets.len() {
        return Err(Error::ShapeMismatch {
            expected: targets.len(),
            got: preds.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::EmptyData("uscore over zero rows".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be > 0, got {eps}")));
    }
    let total: f64 = preds
        .iter()
        .zip(targets)
        .map(|(p, t)| 1.0 - (p - t).abs() / (p.abs() + t.abs() + eps))
        .sum();
    Ok(total / preds.len() as f64)
}

/// Fraction of the annotated predictive features recovered in a top-k set.
/// Defined for equal-size sets only.
pub fn fprec(topk: &[usize], annotated: &[usize]) -> Result<f64> {
    if topk.len() != annotated.len() {
        return Err(Error::InvalidParameter(format!(
            "top-k set has {} entries but the annotation has {}; the metric is defined for equal k",
            topk.len(),
            annotated.len()
        )));
    }
    let k = topk.len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let hits = topk.iter().filter(|i| annotated.contains(i)).count();
    Ok(hits as f64 / k as f64)
}

/// Mean agreement between each sample's top-k features and the top-k of the
/// dataset-mean absolute attribution.
pub fn consistency(per_sample: &[AttributionVector], k: usize) -> Result<f64> {
    let first = per_sample
        .first()
        .ok_or_else(|| Error::EmptyData("consistency over zero samples".into()))?;
    let n = first.values.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    let mut mean_abs = vec![0.0; n];
    for a in per_sample {
        if a.values.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: a.values.len(),
            });
        }
        for (m, v) in mean_abs.iter_mut().zip(&a.values) {
            *m += v.abs();
        }
    }
    for m in &mut mean_abs {
        *m /= per_sample.len() as f64;
    }
    let reference_holder = AttributionVector {
        values: mean_abs,
        ..first.clone()
    };
    let reference = topk_features(&reference_holder, k)?;

    let mut total = 0.0;
    for a in per_sample {
        let top = topk_features(a, k)?;
        let hits = top.iter().filter(|i| reference.contains(i)).count();
        total += hits as f64 / k as f64;
    }
    Ok(total / per_sample.len() as f64)
}

/// Normalized trapezoidal area under a per-epoch curve of values in `[0, 1]`.
pub fn convergence_auc(curve: &[f64]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(Error::InvalidParameter(
            "convergence area needs at least 2 epochs".into(),
        ));
    }
    let area: f64 = curve.windows(2).map(|w| (w[0] + w[1]) / 2.0).sum();
    Ok(area / (curve.len() - 1) as f64)
}

/// MAE for regression; threshold-0.5 accuracy on probability outputs for
/// binary classification.
pub fn basic_metrics(preds: &[f64], targets: &[f64], task: Task) -> Result<Vec<MetricRecord>> {
    if preds.len() != targets.len() {
        return Err(Error::ShapeMismatch {
            expected: targets.len(),
            got: preds.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::EmptyData("metrics over zero rows".into()));
    }
    let n = preds.len() as f64;
    Ok(match task {
        Task::Regression => {
            let mae = preds.iter().zip(targets).map(|(p, t)| (p - t).abs()).sum::<f64>() / n;
            vec![MetricRecord::new("mae", mae)]
        }
        Task::Classification => {
            let correct = preds
                .iter()
                .zip(targets)
                .filter(|(p, t)| f64::from(**p >= 0.5) == **t)
                .count();
            vec![MetricRecord::new("accuracy", correct as f64 / n)]
        }
    })
}

/// Scores a trained model on a dataset's validation rows: MAE plus the
/// uniform score for regression, accuracy on sigmoid outputs for binary
/// classification.
pub fn validation_metrics(
    model: &MlpModel,
    data: &TabularDataset,
    task: Task,
) -> Result<Vec<MetricRecord>> {
    let rows = data.validation_indices();
    if rows.is_empty() {
        return Err(Error::EmptyData("no rows tagged validation".into()));
    }
    let mut preds = Vec::with_capacity(rows.len());
    let mut targets = Vec::with_capacity(rows.len());
    for &r in &rows {
        let out = model.forward_eval(data.row(r))?[0];
        preds.push(match task {
            Task::Regression => out,
            Task::Classification => sigmoid(out),
        });
        targets.push(data.target(r));
    }
    let mut records = basic_metrics(&preds, &targets, task)?;
    if task == Task::Regression {
        records.push(MetricRecord::new("uscore", uscore(&preds, &targets, USCORE_EPS)?));
    }
    Ok(records)
}
