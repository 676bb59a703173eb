//! Minibatch training with SGD and Adam.
//!
//! All shuffling and dropout randomness flows from `TrainConfig::seed`, so a
//! fixed (architecture seed, train seed, data seed) triple reproduces final
//! parameters bit-exactly.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

use super::{sigmoid, Mode, MlpModel, ParamGrads, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Mse,
    /// Binary cross-entropy on a single logit output; the sigmoid lives in
    /// the loss, so attribution sees the unsaturated logit.
    Bce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub optimizer: OptimizerKind,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub loss: LossKind,
    pub seed: u64,
    /// Epoch stride at which the training observer is invoked.
    pub record_attribution_every: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerKind::Adam,
            learning_rate: 1e-3,
            epochs: 1000,
            batch_size: 128,
            loss: LossKind::Mse,
            seed: 0,
            record_attribution_every: None,
        }
    }
}

/// What a training run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean per-row training loss, one entry per epoch.
    pub per_epoch_loss: Vec<f64>,
    /// Observer-recorded precision curves, keyed by method name.
    pub per_epoch_fprec: Option<BTreeMap<String, Vec<f64>>>,
    pub wall_time_s: f64,
    /// Static estimate of resident training state (parameters, optimizer
    /// moments, activation buffers), not a measured high-water mark.
    pub peak_bytes: u64,
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

enum OptimizerState {
    Sgd,
    Adam {
        m: Vec<Vec<f64>>,
        v: Vec<Vec<f64>>,
        mb: Vec<Vec<f64>>,
        vb: Vec<Vec<f64>>,
        t: u64,
    },
}

impl OptimizerState {
    fn new(kind: OptimizerKind, model: &MlpModel) -> Self {
        match kind {
            OptimizerKind::Sgd => OptimizerState::Sgd,
            OptimizerKind::Adam => {
                let wshapes: Vec<Vec<f64>> =
                    model.layers().iter().map(|l| vec![0.0; l.weights.len()]).collect();
                let bshapes: Vec<Vec<f64>> =
                    model.layers().iter().map(|l| vec![0.0; l.biases.len()]).collect();
                OptimizerState::Adam {
                    m: wshapes.clone(),
                    v: wshapes.clone(),
                    mb: bshapes.clone(),
                    vb: bshapes,
                    t: 0,
                }
            }
        }
    }

    fn step(&mut self, model: &mut MlpModel, grads: &ParamGrads, lr: f64) {
        match self {
            OptimizerState::Sgd => {
                for (l, layer) in model.layers.iter_mut().enumerate() {
                    for (w, g) in layer.weights.iter_mut().zip(&grads.d_weights[l]) {
                        *w -= lr * g;
                    }
                    for (b, g) in layer.biases.iter_mut().zip(&grads.d_biases[l]) {
                        *b -= lr * g;
                    }
                }
            }
            OptimizerState::Adam { m, v, mb, vb, t } => {
                *t += 1;
                let bc1 = 1.0 - ADAM_BETA1.powi(*t as i32);
                let bc2 = 1.0 - ADAM_BETA2.powi(*t as i32);
                for (l, layer) in model.layers.iter_mut().enumerate() {
                    adam_update(&mut layer.weights, &grads.d_weights[l], &mut m[l], &mut v[l], lr, bc1, bc2);
                    adam_update(&mut layer.biases, &grads.d_biases[l], &mut mb[l], &mut vb[l], lr, bc1, bc2);
                }
            }
        }
    }

    fn state_bytes(&self, model: &MlpModel) -> u64 {
        match self {
            OptimizerState::Sgd => 0,
            OptimizerState::Adam { .. } => 2 * model.n_params() as u64 * 8,
        }
    }
}

fn adam_update(params: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64], lr: f64, bc1: f64, bc2: f64) {
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g;
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
    }
}

/// Per-row loss and its gradient with respect to the scalar model output.
fn loss_and_grad(kind: LossKind, pred: f64, target: f64) -> (f64, f64) {
    match kind {
        LossKind::Mse => {
            let e = pred - target;
            (e * e, 2.0 * e)
        }
        LossKind::Bce => {
            // pred is the logit; stable softplus form.
            let loss = pred.max(0.0) - pred * target + (-pred.abs()).exp().ln_1p();
            (loss, sigmoid(pred) - target)
        }
    }
}

fn validate(model: &MlpModel, data: &TabularDataset, cfg: &TrainConfig) -> Result<Vec<usize>> {
    if !(cfg.learning_rate > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "learning_rate must be > 0, got {}",
            cfg.learning_rate
        )));
    }
    if cfg.batch_size == 0 {
        return Err(Error::InvalidParameter("batch_size must be >= 1".into()));
    }
    if model.input_dim() != data.n_cols() {
        return Err(Error::ShapeMismatch {
            expected: data.n_cols(),
            got: model.input_dim(),
        });
    }
    if model.output_dim() != 1 {
        return Err(Error::InvalidArchitecture(
            "training targets are scalar; model must have one output".into(),
        ));
    }
    if cfg.loss == LossKind::Bce {
        if let Some(bad) = data.targets().iter().find(|&&y| y != 0.0 && y != 1.0) {
            return Err(Error::InvalidTarget(format!(
                "bce needs 0/1 targets, found {bad}"
            )));
        }
    }
    let train_rows = data.train_indices();
    if train_rows.is_empty() {
        return Err(Error::EmptyData("no rows tagged train".into()));
    }
    Ok(train_rows)
}

/// Trains in place. The model is left in eval mode.
pub fn train(model: &mut MlpModel, data: &TabularDataset, cfg: &TrainConfig) -> Result<TrainReport> {
    train_with_observer(model, data, cfg, |_, _| None)
}

/// Trains in place, invoking `observer` after each epoch selected by
/// `cfg.record_attribution_every`. The observer sees the model in eval mode
/// and may return (method name, precision) pairs to be collected into the
/// report's curves.
pub fn train_with_observer(
    model: &mut MlpModel,
    data: &TabularDataset,
    cfg: &TrainConfig,
    mut observer: impl FnMut(usize, &MlpModel) -> Option<Vec<(String, f64)>>,
) -> Result<TrainReport> {
    let start = Instant::now();
    let train_rows = validate(model, data, cfg)?;

    let mut rng = rng_from_seed(cfg.seed);
    let mut opt = OptimizerState::new(cfg.optimizer, model);
    let mut ws = Workspace::new(model);
    let mut grads = ParamGrads::zeros(model);
    let mut order = train_rows;
    let mut per_epoch_loss = Vec::with_capacity(cfg.epochs);
    let mut fprec_curves: BTreeMap<String, Vec<f64>> = BTreeMap::new();

    model.set_mode(Mode::Train);
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grads.clear();
            let mut batch_loss = 0.0;
            for &row in batch {
                let x = data.row(row);
                let dropout = model.dropout_rate() > 0.0;
                model.forward_into(x, &mut ws, if dropout { Some(&mut rng) } else { None });
                let (loss, d_pred) = loss_and_grad(cfg.loss, ws.output()[0], data.target(row));
                batch_loss += loss;
                model.backward(&ws, &[d_pred], Some(&mut grads), None);
            }
            grads.scale(1.0 / batch.len() as f64);
            opt.step(model, &grads, cfg.learning_rate);
            epoch_loss += batch_loss;
        }
        per_epoch_loss.push(epoch_loss / order.len() as f64);

        if let Some(stride) = cfg.record_attribution_every {
            if stride > 0 && (epoch + 1) % stride == 0 {
                model.set_mode(Mode::Eval);
                if let Some(pairs) = observer(epoch, model) {
                    for (name, value) in pairs {
                        fprec_curves.entry(name).or_default().push(value);
                    }
                }
                model.set_mode(Mode::Train);
            }
        }
    }
    model.set_mode(Mode::Eval);

    let peak_bytes = (model.n_params() as u64 * 8) * 2           // params + grads
        + opt.state_bytes(model)
        + model.layer_widths().iter().sum::<usize>() as u64 * 8 * 2; // activations
    Ok(TrainReport {
        per_epoch_loss,
        per_epoch_fprec: if fprec_curves.is_empty() { None } else { Some(fprec_curves) },
        wall_time_s: start.elapsed().as_secs_f64(),
        peak_bytes,
    })
}

/// Mean per-row loss over `(x, y)` rows on the deterministic eval path.
pub fn batch_loss(model: &MlpModel, rows: &[(&[f64], f64)], loss: LossKind) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::EmptyData("batch_loss over zero rows".into()));
    }
    let mut total = 0.0;
    for &(x, y) in rows {
        let out = model.forward_eval(x)?;
        total += loss_and_grad(loss, out[0], y).0;
    }
    Ok(total / rows.len() as f64)
}

/// Mean loss and its exact gradient with respect to the flattened parameter
/// vector, on the deterministic eval path. This is the reverse-mode surface
/// that finite-difference checks exercise.
pub fn batch_param_gradient(
    model: &MlpModel,
    rows: &[(&[f64], f64)],
    loss: LossKind,
) -> Result<(f64, Vec<f64>)> {
    if rows.is_empty() {
        return Err(Error::EmptyData("batch_param_gradient over zero rows".into()));
    }
    let mut ws = Workspace::new(model);
    let mut grads = ParamGrads::zeros(model);
    let mut total = 0.0;
    for &(x, y) in rows {
        if x.len() != model.input_dim() {
            return Err(Error::ShapeMismatch {
                expected: model.input_dim(),
                got: x.len(),
            });
        }
        model.forward_into(x, &mut ws, None);
        let (loss_val, d_pred) = loss_and_grad(loss, ws.output()[0], y);
        total += loss_val;
        model.backward(&ws, &[d_pred], Some(&mut grads), None);
    }
    grads.scale(1.0 / rows.len() as f64);
    Ok((total / rows.len() as f64, grads.to_vector()))
}
