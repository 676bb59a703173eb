//! From-scratch differentiable multilayer perceptron.
//!
//! Dense layers with ReLU on hidden activations and identity output.
//! Gradients with respect to both parameters and inputs are exact
//! reverse-mode backpropagation, never numerical differentiation. Dropout is
//! inverted: masks scale surviving hidden activations by `1/(1-p)` during
//! training so the eval path needs no rescaling.
//!
//! The ReLU subgradient at exactly 0 is defined as 0; finite-difference
//! checks must stay away from kinks.

mod train;

pub use train::{
    batch_loss, batch_param_gradient, train, train_with_observer, LossKind, OptimizerKind,
    TrainConfig, TrainReport,
};

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SeededRng};

/// Checkpoint schema version.
pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Forward-pass behavior: `Train` applies dropout masks, `Eval` is
/// deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Train,
    Eval,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseLayer {
    pub(crate) in_dim: usize,
    pub(crate) out_dim: usize,
    /// Row-major, `out_dim x in_dim`.
    pub(crate) weights: Vec<f64>,
    pub(crate) biases: Vec<f64>,
}

impl DenseLayer {
    /// `out = W x + b`.
    fn affine_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for j in 0..self.out_dim {
            let row = &self.weights[j * self.in_dim..(j + 1) * self.in_dim];
            let z: f64 = row.iter().zip(x).map(|(w, v)| w * v).sum();
            out.push(z + self.biases[j]);
        }
    }
}

/// A fully-connected ReLU network with identity output.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layer_widths: Vec<usize>,
    layers: Vec<DenseLayer>,
    dropout_rate: f64,
    mode: Mode,
}

impl MlpModel {
    /// Builds a network with weights drawn from
    /// `uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))` and zero biases.
    /// `layer_widths` lists input dim, hidden widths, output dim.
    pub fn new(layer_widths: &[usize], dropout_rate: f64, seed: u64) -> Result<Self> {
        if layer_widths.len() < 2 {
            return Err(Error::InvalidArchitecture(format!(
                "need at least input and output widths, got {layer_widths:?}"
            )));
        }
        if layer_widths.iter().any(|&w| w == 0) {
            return Err(Error::InvalidArchitecture(format!(
                "zero width in {layer_widths:?}"
            )));
        }
        if !(0.0..1.0).contains(&dropout_rate) {
            return Err(Error::InvalidParameter(format!(
                "dropout_rate must lie in [0, 1), got {dropout_rate}"
            )));
        }
        let mut rng = rng_from_seed(seed);
        let layers = layer_widths
            .windows(2)
            .map(|w| {
                let (in_dim, out_dim) = (w[0], w[1]);
                let limit = 1.0 / (in_dim as f64).sqrt();
                let weights = (0..in_dim * out_dim)
                    .map(|_| rng.random_range(-limit..limit))
                    .collect();
                DenseLayer {
                    in_dim,
                    out_dim,
                    weights,
                    biases: vec![0.0; out_dim],
                }
            })
            .collect();
        Ok(Self {
            layer_widths: layer_widths.to_vec(),
            layers,
            dropout_rate,
            mode: Mode::Train,
        })
    }

    pub fn layer_widths(&self) -> &[usize] {
        &self.layer_widths
    }

    pub fn input_dim(&self) -> usize {
        self.layer_widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_widths.last().unwrap()
    }

    pub fn dropout_rate(&self) -> f64 {
        self.dropout_rate
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    pub(crate) fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::ShapeMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Forward pass honoring the current mode. In train mode, dropout masks
    /// are drawn from `rng`; in eval mode `rng` is untouched.
    pub fn forward(&self, x: &[f64], rng: &mut SeededRng) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut ws = Workspace::new(self);
        let dropout = self.mode == Mode::Train;
        self.forward_into(x, &mut ws, if dropout { Some(rng) } else { None });
        Ok(ws.output().to_vec())
    }

    /// Deterministic forward pass on the eval path, regardless of mode.
    pub fn forward_eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut ws = Workspace::new(self);
        self.forward_into(x, &mut ws, None);
        Ok(ws.output().to_vec())
    }

    /// Exact gradient of output `output_index` with respect to the input,
    /// computed by reverse mode on the eval path.
    pub fn input_gradient(&self, x: &[f64], output_index: usize) -> Result<Vec<f64>> {
        self.check_input(x)?;
        if output_index >= self.output_dim() {
            return Err(Error::IndexOutOfRange {
                index: output_index,
                len: self.output_dim(),
            });
        }
        let mut ws = Workspace::new(self);
        self.forward_into(x, &mut ws, None);
        let mut d_out = vec![0.0; self.output_dim()];
        d_out[output_index] = 1.0;
        let mut d_input = vec![0.0; self.input_dim()];
        self.backward(&ws, &d_out, None, Some(&mut d_input));
        Ok(d_input)
    }

    /// Fills `ws` with activations and preactivations. When `mask_rng` is
    /// given and dropout is enabled, hidden activations are masked.
    pub(crate) fn forward_into(
        &self,
        x: &[f64],
        ws: &mut Workspace,
        mut mask_rng: Option<&mut SeededRng>,
    ) {
        ws.acts[0].clear();
        ws.acts[0].extend_from_slice(x);
        ws.masked = false;
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let (head, tail) = ws.acts.split_at_mut(l + 1);
            layer.affine_into(&head[l], &mut ws.preacts[l]);
            let act = &mut tail[0];
            act.clear();
            if l == last {
                act.extend_from_slice(&ws.preacts[l]);
            } else {
                act.extend(ws.preacts[l].iter().map(|&z| z.max(0.0)));
                if let Some(rng) = mask_rng.as_deref_mut() {
                    if self.dropout_rate > 0.0 {
                        ws.masked = true;
                        let keep_scale = 1.0 / (1.0 - self.dropout_rate);
                        let mask = &mut ws.masks[l];
                        mask.clear();
                        for a in act.iter_mut() {
                            let keep = rng.random::<f64>() >= self.dropout_rate;
                            let m = if keep { keep_scale } else { 0.0 };
                            mask.push(m);
                            *a *= m;
                        }
                    }
                }
            }
        }
    }

    /// Reverse-mode pass from `d_out` (gradient of a scalar objective with
    /// respect to the network output). Accumulates parameter gradients into
    /// `grads` when given, and writes the input gradient when given.
    pub(crate) fn backward(
        &self,
        ws: &Workspace,
        d_out: &[f64],
        mut grads: Option<&mut ParamGrads>,
        d_input: Option<&mut [f64]>,
    ) {
        let last = self.layers.len() - 1;
        let mut delta = d_out.to_vec();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            if l != last {
                // Back through dropout mask and ReLU.
                for (j, d) in delta.iter_mut().enumerate() {
                    if ws.masked {
                        *d *= ws.masks[l][j];
                    }
                    if ws.preacts[l][j] <= 0.0 {
                        *d = 0.0;
                    }
                }
            }
            if let Some(g) = grads.as_deref_mut() {
                let input = &ws.acts[l];
                for (j, &dz) in delta.iter().enumerate() {
                    let row = &mut g.d_weights[l][j * layer.in_dim..(j + 1) * layer.in_dim];
                    for (w, &a) in row.iter_mut().zip(input) {
                        *w += dz * a;
                    }
                    g.d_biases[l][j] += dz;
                }
            }
            if l == 0 {
                if let Some(out) = d_input {
                    for (i, slot) in out.iter_mut().enumerate() {
                        *slot = (0..layer.out_dim)
                            .map(|j| layer.weights[j * layer.in_dim + i] * delta[j])
                            .sum();
                    }
                }
                break;
            }
            let mut prev = vec![0.0; layer.in_dim];
            for (j, &dz) in delta.iter().enumerate() {
                let row = &layer.weights[j * layer.in_dim..(j + 1) * layer.in_dim];
                for (p, &w) in prev.iter_mut().zip(row) {
                    *p += w * dz;
                }
            }
            delta = prev;
        }
    }

    /// Total number of scalar parameters.
    pub fn n_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Flattens all parameters (per layer: weights row-major, then biases).
    pub fn param_vector(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    /// Writes back a flattened parameter vector from [`Self::param_vector`].
    pub fn set_param_vector(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return Err(Error::ShapeMismatch {
                expected: self.n_params(),
                got: params.len(),
            });
        }
        let mut offset = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&params[offset..offset + nw]);
            offset += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&params[offset..offset + nb]);
            offset += nb;
        }
        Ok(())
    }

    /// Saves a JSON checkpoint.
    pub fn save_checkpoint(&self, path: &Path) -> Result<()> {
        let ckpt = Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            layer_widths: self.layer_widths.clone(),
            dropout_rate: self.dropout_rate,
            weights: self.layers.iter().map(|l| l.weights.clone()).collect(),
            biases: self.layers.iter().map(|l| l.biases.clone()).collect(),
        };
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(f, &ckpt)?;
        Ok(())
    }

    /// Loads a JSON checkpoint. The model comes back in eval mode.
    pub fn load_checkpoint(path: &Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let ckpt: Checkpoint = serde_json::from_reader(f)?;
        if ckpt.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: CHECKPOINT_FORMAT_VERSION,
                found: ckpt.format_version,
            });
        }
        let mut model = Self::new(&ckpt.layer_widths, ckpt.dropout_rate, 0)?;
        for ((layer, w), b) in model.layers.iter_mut().zip(ckpt.weights).zip(ckpt.biases) {
            if w.len() != layer.weights.len() || b.len() != layer.biases.len() {
                return Err(Error::ShapeMismatch {
                    expected: layer.weights.len(),
                    got: w.len(),
                });
            }
            layer.weights = w;
            layer.biases = b;
        }
        model.mode = Mode::Eval;
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format_version: u32,
    layer_widths: Vec<usize>,
    dropout_rate: f64,
    /// Row-major `out_dim x in_dim` per layer.
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Reusable per-sample forward buffers.
pub(crate) struct Workspace {
    /// `acts[0]` is the input; `acts[l+1]` is layer `l`'s (masked) output.
    pub(crate) acts: Vec<Vec<f64>>,
    pub(crate) preacts: Vec<Vec<f64>>,
    /// Dropout multipliers per hidden layer; meaningful only when `masked`.
    masks: Vec<Vec<f64>>,
    masked: bool,
}

impl Workspace {
    pub(crate) fn new(model: &MlpModel) -> Self {
        let widths = &model.layer_widths;
        Self {
            acts: widths.iter().map(|&w| Vec::with_capacity(w)).collect(),
            preacts: widths[1..].iter().map(|&w| Vec::with_capacity(w)).collect(),
            masks: widths[1..widths.len() - 1]
                .iter()
                .map(|&w| Vec::with_capacity(w))
                .collect(),
            masked: false,
        }
    }

    pub(crate) fn output(&self) -> &[f64] {
        self.acts.last().unwrap()
    }
}

/// Per-layer parameter gradients, shaped like the model.
pub(crate) struct ParamGrads {
    pub(crate) d_weights: Vec<Vec<f64>>,
    pub(crate) d_biases: Vec<Vec<f64>>,
}

impl ParamGrads {
    pub(crate) fn zeros(model: &MlpModel) -> Self {
        Self {
            d_weights: model.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            d_biases: model.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    pub(crate) fn clear(&mut self) {
        for w in &mut self.d_weights {
            w.iter_mut().for_each(|v| *v = 0.0);
        }
        for b in &mut self.d_biases {
            b.iter_mut().for_each(|v| *v = 0.0);
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for w in &mut self.d_weights {
            w.iter_mut().for_each(|v| *v *= factor);
        }
        for b in &mut self.d_biases {
            b.iter_mut().for_each(|v| *v *= factor);
        }
    }

    /// Flattened in [`MlpModel::param_vector`] order.
    pub(crate) fn to_vector(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.d_weights.iter().zip(&self.d_biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A 1-output linear model `y = w.x + b` built through the public API.
    fn linear_model(w: &[f64], b: f64) -> MlpModel {
        let mut m = MlpModel::new(&[w.len(), 1], 0.0, 0).unwrap();
        let mut params = w.to_vec();
        params.push(b);
        m.set_param_vector(&params).unwrap();
        m.set_mode(Mode::Eval);
        m
    }

    #[test]
    fn rejects_bad_architectures() {
        assert!(MlpModel::new(&[], 0.0, 0).is_err());
        assert!(MlpModel::new(&[4], 0.0, 0).is_err());
        assert!(MlpModel::new(&[4, 0, 1], 0.0, 0).is_err());
        assert!(MlpModel::new(&[4, 1], 1.0, 0).is_err());
    }

    #[test]
    fn shapes_chain_with_widths() {
        let m = MlpModel::new(&[2, 1], 0.0, 7).unwrap();
        assert_eq!(m.layers().len(), 1);
        assert_eq!(m.layers()[0].weights.len(), 2);
        assert_eq!(m.layers()[0].biases.len(), 1);

        let deep = MlpModel::new(&[11, 100, 100, 100, 1], 0.0, 7).unwrap();
        assert_eq!(deep.layers().len(), 4);
        assert_eq!(deep.n_params(), 11 * 100 + 100 + 100 * 100 + 100 + 100 * 100 + 100 + 100 + 1);
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let a = MlpModel::new(&[5, 8, 1], 0.1, 42).unwrap();
        let b = MlpModel::new(&[5, 8, 1], 0.1, 42).unwrap();
        assert_eq!(a.param_vector(), b.param_vector());
        let c = MlpModel::new(&[5, 8, 1], 0.1, 43).unwrap();
        assert_ne!(a.param_vector(), c.param_vector());
    }

    #[test]
    fn init_biases_zero_and_weights_bounded() {
        let m = MlpModel::new(&[9, 16, 1], 0.0, 3).unwrap();
        for layer in m.layers() {
            assert!(layer.biases.iter().all(|&b| b == 0.0));
            let limit = 1.0 / (layer.in_dim as f64).sqrt();
            assert!(layer.weights.iter().all(|&w| w.abs() < limit));
        }
    }

    #[test]
    fn linear_forward_value() {
        let m = linear_model(&[2.0, -1.0], 0.0);
        assert_eq!(m.forward_eval(&[1.0, 1.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn forward_rejects_bad_shape() {
        let m = linear_model(&[2.0, -1.0], 0.0);
        assert!(m.forward_eval(&[1.0]).is_err());
    }

    #[test]
    fn eval_ignores_rng_and_is_pure() {
        let mut m = MlpModel::new(&[3, 8, 1], 0.5, 5).unwrap();
        m.set_mode(Mode::Eval);
        let x = [0.1, -0.4, 0.9];
        let mut r1 = rng_from_seed(1);
        let mut r2 = rng_from_seed(2);
        let a = m.forward(&x, &mut r1).unwrap();
        let b = m.forward(&x, &mut r2).unwrap();
        let c = m.forward_eval(&x).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn zero_dropout_train_equals_eval() {
        let m = MlpModel::new(&[4, 10, 10, 1], 0.0, 9).unwrap();
        let x = [0.3, -0.2, 0.8, 0.05];
        let mut rng = rng_from_seed(11);
        let train_out = m.forward(&x, &mut rng).unwrap();
        assert_eq!(train_out, m.forward_eval(&x).unwrap());
    }

    #[test]
    fn dead_relu_leaves_bias_path() {
        // Hidden preactivations forced negative: output is the output bias.
        let mut m = MlpModel::new(&[1, 2, 1], 0.0, 0).unwrap();
        m.set_param_vector(&[-5.0, -5.0, -1.0, -1.0, 3.0, 3.0, 0.25]).unwrap();
        assert_eq!(m.forward_eval(&[1.0]).unwrap(), vec![0.25]);
    }

    #[test]
    fn linear_input_gradient_is_weight_row() {
        let m = linear_model(&[2.0, -1.0], 0.3);
        for x in [[0.0, 0.0], [1.0, -2.0], [0.5, 0.25]] {
            assert_eq!(m.input_gradient(&x, 0).unwrap(), vec![2.0, -1.0]);
        }
    }

    #[test]
    fn input_gradient_is_pure() {
        let m = MlpModel::new(&[6, 12, 12, 2], 0.0, 17).unwrap();
        let x = [0.1, 0.2, -0.3, 0.4, -0.5, 0.6];
        assert_eq!(m.input_gradient(&x, 1).unwrap(), m.input_gradient(&x, 1).unwrap());
    }

    #[test]
    fn input_gradient_rejects_bad_index() {
        let m = MlpModel::new(&[2, 4, 1], 0.0, 0).unwrap();
        assert!(matches!(
            m.input_gradient(&[0.1, 0.2], 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        let mut rng = rng_from_seed(2024);
        for (arch, seed) in [
            (vec![4, 16, 1], 1u64),
            (vec![6, 32, 32, 1], 2),
            (vec![3, 8, 8, 8, 2], 3),
        ] {
            let m = MlpModel::new(&arch, 0.0, seed).unwrap();
            let mut checked = 0;
            while checked < 20 {
                let x: Vec<f64> =
                    (0..arch[0]).map(|_| rng.random_range(-1.0..1.0)).collect();
                if near_relu_kink(&m, &x) {
                    continue;
                }
                checked += 1;
                for t in 0..*arch.last().unwrap() {
                    let analytic = m.input_gradient(&x, t).unwrap();
                    for i in 0..x.len() {
                        let h = 1e-4;
                        let mut xp = x.clone();
                        xp[i] += h;
                        let mut xm = x.clone();
                        xm[i] -= h;
                        let fd = (m.forward_eval(&xp).unwrap()[t]
                            - m.forward_eval(&xm).unwrap()[t])
                            / (2.0 * h);
                        let denom = analytic[i].abs().max(fd.abs()).max(1e-4);
                        assert!(
                            (analytic[i] - fd).abs() / denom < 1e-4,
                            "arch {arch:?} target {t} dim {i}: {} vs {fd}",
                            analytic[i]
                        );
                    }
                }
            }
        }
    }

    fn near_relu_kink(m: &MlpModel, x: &[f64]) -> bool {
        let mut ws = Workspace::new(m);
        m.forward_into(x, &mut ws, None);
        ws.preacts[..ws.preacts.len() - 1]
            .iter()
            .any(|layer| layer.iter().any(|z| z.abs() < 1e-3))
    }

    #[test]
    fn checkpoint_round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let m = MlpModel::new(&[7, 20, 20, 1], 0.25, 33).unwrap();
        m.save_checkpoint(&path).unwrap();
        let back = MlpModel::load_checkpoint(&path).unwrap();
        assert_eq!(m.param_vector(), back.param_vector());
        assert_eq!(m.layer_widths(), back.layer_widths());
        assert_eq!(m.dropout_rate(), back.dropout_rate());
        assert_eq!(back.mode(), Mode::Eval);
    }

    #[test]
    fn sigmoid_is_stable_and_monotone() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(800.0) <= 1.0 && sigmoid(800.0) > 0.999);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(-800.0) < 1e-300);
        assert!(sigmoid(1.0) > sigmoid(0.5));
    }
}
