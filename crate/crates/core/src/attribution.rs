//! Post-hoc local attribution: saliency, integrated gradients, a rescale-rule
//! backward pass, and feature ablation, plus top-k extraction and group
//! aggregation.
//!
//! The baseline input is the all-zeros vector throughout. Gradient- and
//! perturbation-based methods are generic over [`AttributionTarget`] so they
//! run identically against a trained [`MlpModel`] or an exact
//! [`SymbolicEvaluator`]; the rescale backward pass needs layer internals and
//! is defined for models only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{MlpModel, Workspace};
use crate::symfunc::SymbolicFunction;

/// Anything that can report a scalar output and its exact input gradient.
pub trait AttributionTarget {
    fn input_dim(&self) -> usize;
    /// Output component `target` at `x`.
    fn output(&self, x: &[f64], target: usize) -> Result<f64>;
    /// Exact gradient of output `target` with respect to `x`.
    fn input_gradient(&self, x: &[f64], target: usize) -> Result<Vec<f64>>;
}

impl AttributionTarget for MlpModel {
    fn input_dim(&self) -> usize {
        MlpModel::input_dim(self)
    }

    fn output(&self, x: &[f64], target: usize) -> Result<f64> {
        let out = self.forward_eval(x)?;
        out.get(target).copied().ok_or(Error::IndexOutOfRange {
            index: target,
            len: out.len(),
        })
    }

    fn input_gradient(&self, x: &[f64], target: usize) -> Result<Vec<f64>> {
        MlpModel::input_gradient(self, x, target)
    }
}

/// Exact stand-in for a perfectly trained model: evaluates a symbolic
/// function on the first `arity` features and ignores the rest.
#[derive(Debug, Clone, Copy)]
pub struct SymbolicEvaluator {
    func: SymbolicFunction,
    n_features: usize,
}

impl SymbolicEvaluator {
    pub fn new(func: SymbolicFunction, n_features: usize) -> Result<Self> {
        if n_features < func.arity() {
            return Err(Error::InvalidParameter(format!(
                "evaluator needs at least {} features, got {n_features}",
                func.arity()
            )));
        }
        Ok(Self { func, n_features })
    }
}

impl AttributionTarget for SymbolicEvaluator {
    fn input_dim(&self) -> usize {
        self.n_features
    }

    fn output(&self, x: &[f64], target: usize) -> Result<f64> {
        if target != 0 {
            return Err(Error::IndexOutOfRange { index: target, len: 1 });
        }
        if x.len() != self.n_features {
            return Err(Error::ShapeMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        self.func.evaluate(&x[..self.func.arity()])
    }

    fn input_gradient(&self, x: &[f64], target: usize) -> Result<Vec<f64>> {
        if target != 0 {
            return Err(Error::IndexOutOfRange { index: target, len: 1 });
        }
        if x.len() != self.n_features {
            return Err(Error::ShapeMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut g = self.func.gradient(&x[..self.func.arity()])?;
        g.resize(self.n_features, 0.0);
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributionMethod {
    Sa,
    Ig,
    Dl,
    Fa,
}

impl AttributionMethod {
    pub const ALL: [AttributionMethod; 4] = [
        AttributionMethod::Sa,
        AttributionMethod::Ig,
        AttributionMethod::Dl,
        AttributionMethod::Fa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttributionMethod::Sa => "sa",
            AttributionMethod::Ig => "ig",
            AttributionMethod::Dl => "dl",
            AttributionMethod::Fa => "fa",
        }
    }
}

impl std::str::FromStr for AttributionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" => Ok(AttributionMethod::Sa),
            "ig" => Ok(AttributionMethod::Ig),
            "dl" => Ok(AttributionMethod::Dl),
            "fa" => Ok(AttributionMethod::Fa),
            other => Err(Error::InvalidParameter(format!(
                "unknown attribution method {other:?}, expected sa|ig|dl|fa"
            ))),
        }
    }
}

impl std::fmt::Display for AttributionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The reference input attributions are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Zeros,
}

/// Per-feature importance scores for one instance and one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionVector {
    pub values: Vec<f64>,
    pub method: AttributionMethod,
    pub target_index: usize,
    pub baseline: Baseline,
}

impl AttributionVector {
    fn new(values: Vec<f64>, method: AttributionMethod, target_index: usize) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self {
            values,
            method,
            target_index,
            baseline: Baseline::Zeros,
        }
    }
}

/// A named set of feature indices treated as one unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureGroup {
    pub name: String,
    pub indices: Vec<usize>,
}

impl FeatureGroup {
    pub fn new(name: impl Into<String>, indices: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            indices,
        }
    }
}

fn check_input<T: AttributionTarget>(target: &T, x: &[f64]) -> Result<()> {
    if x.len() != target.input_dim() {
        return Err(Error::ShapeMismatch {
            expected: target.input_dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Raw gradient of the output with respect to the input.
pub fn saliency<T: AttributionTarget>(
    target: &T,
    x: &[f64],
    output_index: usize,
) -> Result<AttributionVector> {
    check_input(target, x)?;
    let values = target.input_gradient(x, output_index)?;
    Ok(AttributionVector::new(values, AttributionMethod::Sa, output_index))
}

/// Gradient path integral from the zero baseline, midpoint rule with `steps`
/// segments: `a_i = x_i * mean_s dF/dx_i((s - 0.5)/steps * x)`.
///
/// Midpoint evaluation keeps linear targets exact for any step count.
pub fn integrated_gradients<T: AttributionTarget>(
    target: &T,
    x: &[f64],
    steps: usize,
    output_index: usize,
) -> Result<AttributionVector> {
    check_input(target, x)?;
    if steps < 1 {
        return Err(Error::InvalidParameter(
            "integrated gradients needs at least 1 step".into(),
        ));
    }
    let n = x.len();
    let mut accum = vec![0.0; n];
    for s in 0..steps {
        let alpha = (s as f64 + 0.5) / steps as f64;
        let point: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let grad = target.input_gradient(&point, output_index)?;
        for (a, g) in accum.iter_mut().zip(&grad) {
            *a += g;
        }
    }
    let values = accum
        .iter()
        .zip(x)
        .map(|(a, v)| v * a / steps as f64)
        .collect();
    Ok(AttributionVector::new(values, AttributionMethod::Ig, output_index))
}

/// Output change when a feature (or a whole group) is replaced by the zero
/// baseline: `a_i = F(x) - F(x with x_i <- 0)`. With groups, all members are
/// zeroed together and each member receives the group delta; ungrouped
/// features score 0.
pub fn feature_ablation<T: AttributionTarget>(
    target: &T,
    x: &[f64],
    groups: Option<&[FeatureGroup]>,
    output_index: usize,
) -> Result<AttributionVector> {
    check_input(target, x)?;
    let n = x.len();
    let fx = target.output(x, output_index)?;
    let mut values = vec![0.0; n];
    match groups {
        None => {
            let mut probe = x.to_vec();
            for i in 0..n {
                let kept = probe[i];
                probe[i] = 0.0;
                values[i] = fx - target.output(&probe, output_index)?;
                probe[i] = kept;
            }
        }
        Some(groups) => {
            validate_groups(groups, n, false)?;
            let mut probe = x.to_vec();
            for group in groups {
                for &i in &group.indices {
                    probe[i] = 0.0;
                }
                let delta = fx - target.output(&probe, output_index)?;
                for &i in &group.indices {
                    values[i] = delta;
                    probe[i] = x[i];
                }
            }
        }
    }
    Ok(AttributionVector::new(values, AttributionMethod::Fa, output_index))
}

/// Layer-wise redistribution of the output delta `F(x) - F(0)`.
///
/// Works backward through the network: linear layers propagate by weight
/// share of the preactivation delta, each ReLU applies the multiplier
/// `delta_activation / delta_preactivation` computed against a forward pass
/// on the zero baseline, falling back to the local gradient when the
/// preactivation delta is below 1e-7. Attributions are the final multipliers
/// times the input delta, which makes them sum to the output delta.
pub fn deeplift_rescale(model: &MlpModel, x: &[f64], output_index: usize) -> Result<AttributionVector> {
    check_input(model, x)?;
    if output_index >= model.output_dim() {
        return Err(Error::IndexOutOfRange {
            index: output_index,
            len: model.output_dim(),
        });
    }
    const DELTA_GUARD: f64 = 1e-7;

    let baseline = vec![0.0; x.len()];
    let mut ws_x = Workspace::new(model);
    let mut ws_b = Workspace::new(model);
    model.forward_into(x, &mut ws_x, None);
    model.forward_into(&baseline, &mut ws_b, None);

    let layers = model.layers();
    let last = layers.len() - 1;
    let mut multipliers = vec![0.0; model.output_dim()];
    multipliers[output_index] = 1.0;
    for (l, layer) in layers.iter().enumerate().rev() {
        if l != last {
            for (j, m) in multipliers.iter_mut().enumerate() {
                let dz = ws_x.preacts[l][j] - ws_b.preacts[l][j];
                let da = ws_x.acts[l + 1][j] - ws_b.acts[l + 1][j];
                *m *= if dz.abs() > DELTA_GUARD {
                    da / dz
                } else if ws_x.preacts[l][j] > 0.0 {
                    1.0
                } else {
                    0.0
                };
            }
        }
        let mut prev = vec![0.0; layer.in_dim];
        for (j, &m) in multipliers.iter().enumerate() {
            let row = &layer.weights[j * layer.in_dim..(j + 1) * layer.in_dim];
            for (p, &w) in prev.iter_mut().zip(row) {
                *p += w * m;
            }
        }
        multipliers = prev;
    }

    let values = multipliers.iter().zip(x).map(|(m, v)| m * v).collect();
    Ok(AttributionVector::new(values, AttributionMethod::Dl, output_index))
}

/// Normalized share of absolute attribution mass per group:
/// `sum_{i in group} |a_i| / sum_i |a_i|`. Groups must partition the
/// attribution indices. An all-zero attribution yields the uniform share.
pub fn aggregate_group_importance(
    attrib: &AttributionVector,
    groups: &[FeatureGroup],
) -> Result<Vec<f64>> {
    validate_groups(groups, attrib.values.len(), true)?;
    let total: f64 = attrib.values.iter().map(|v| v.abs()).sum();
    if total == 0.0 {
        return Ok(vec![1.0 / groups.len() as f64; groups.len()]);
    }
    Ok(groups
        .iter()
        .map(|g| g.indices.iter().map(|&i| attrib.values[i].abs()).sum::<f64>() / total)
        .collect())
}

fn validate_groups(groups: &[FeatureGroup], n: usize, require_cover: bool) -> Result<()> {
    if groups.is_empty() {
        return Err(Error::InvalidGroup("no groups given".into()));
    }
    let mut seen = vec![false; n];
    for g in groups {
        for &i in &g.indices {
            if i >= n {
                return Err(Error::InvalidGroup(format!(
                    "group {:?} index {i} out of range for {n} features",
                    g.name
                )));
            }
            if seen[i] {
                return Err(Error::InvalidGroup(format!(
                    "feature {i} appears in more than one group"
                )));
            }
            seen[i] = true;
        }
    }
    if require_cover && !seen.iter().all(|&s| s) {
        return Err(Error::InvalidGroup(
            "groups must cover every feature index".into(),
        ));
    }
    Ok(())
}

/// Indices of the `k` largest attributions by absolute value, in descending
/// importance order. Ties break toward the lower index.
pub fn topk_features(attrib: &AttributionVector, k: usize) -> Result<Vec<usize>> {
    let n = attrib.values.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        attrib.values[j]
            .abs()
            .total_cmp(&attrib.values[i].abs())
            .then(i.cmp(&j))
    });
    order.truncate(k);
    Ok(order)
}

/// Runs one method against a trained model.
pub fn attribute_model(
    model: &MlpModel,
    method: AttributionMethod,
    x: &[f64],
    output_index: usize,
    ig_steps: usize,
) -> Result<AttributionVector> {
    match method {
        AttributionMethod::Sa => saliency(model, x, output_index),
        AttributionMethod::Ig => integrated_gradients(model, x, ig_steps, output_index),
        AttributionMethod::Fa => feature_ablation(model, x, None, output_index),
        AttributionMethod::Dl => deeplift_rescale(model, x, output_index),
    }
}

/// Default number of path segments for integrated gradients.
pub const DEFAULT_IG_STEPS: usize = 10;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Mode;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn linear_model(w: &[f64], b: f64) -> MlpModel {
        let mut m = MlpModel::new(&[w.len(), 1], 0.0, 0).unwrap();
        let mut params = w.to_vec();
        params.push(b);
        m.set_param_vector(&params).unwrap();
        m.set_mode(Mode::Eval);
        m
    }

    fn random_model(arch: &[usize], seed: u64) -> MlpModel {
        let mut m = MlpModel::new(arch, 0.0, seed).unwrap();
        m.set_mode(Mode::Eval);
        m
    }

    /// Fresh init has zero biases, which makes the net homogeneous along
    /// rays from the origin (no kink crossings); jitter all parameters so
    /// kinks land inside the integration path like they do after training.
    fn random_model_with_biases(arch: &[usize], seed: u64) -> MlpModel {
        let mut m = random_model(arch, seed);
        let mut rng = rng_from_seed(seed ^ 0xB1A5);
        let mut params = m.param_vector();
        for p in &mut params {
            *p += rng.random_range(-0.2..0.2);
        }
        m.set_param_vector(&params).unwrap();
        m
    }

    #[test]
    fn saliency_on_linear_model_is_the_weight_row() {
        let m = linear_model(&[2.0, -1.0], 0.5);
        for x in [[0.0, 0.0], [0.7, -0.3]] {
            let a = saliency(&m, &x, 0).unwrap();
            assert_eq!(a.values, vec![2.0, -1.0]);
            assert_eq!(a.values, m.input_gradient(&x, 0).unwrap());
        }
    }

    #[test]
    fn ig_on_linear_model_is_weight_times_input() {
        let m = linear_model(&[1.5, -2.0, 0.25], 0.1);
        let x = [0.4, 0.9, -0.6];
        for steps in [1, 7, 10, 64] {
            let a = integrated_gradients(&m, &x, steps, 0).unwrap();
            for (i, &w) in [1.5, -2.0, 0.25].iter().enumerate() {
                assert!((a.values[i] - w * x[i]).abs() < 1e-12, "steps {steps} dim {i}");
            }
        }
    }

    #[test]
    fn ig_at_baseline_is_zero() {
        let m = random_model(&[5, 16, 1], 3);
        let a = integrated_gradients(&m, &[0.0; 5], 10, 0).unwrap();
        assert!(a.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ig_rejects_zero_steps() {
        let m = random_model(&[2, 4, 1], 0);
        assert!(integrated_gradients(&m, &[0.1, 0.2], 0, 0).is_err());
    }

    #[test]
    fn ig_completeness_improves_with_steps() {
        let mut rng = rng_from_seed(17);
        let mut errs = [0.0f64; 3];
        let mut count = 0;
        for seed in 0..10u64 {
            let m = random_model_with_biases(&[6, 24, 24, 1], seed);
            let f0 = m.forward_eval(&[0.0; 6]).unwrap()[0];
            for _ in 0..5 {
                let x: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
                let delta = m.forward_eval(&x).unwrap()[0] - f0;
                if delta.abs() < 1e-2 {
                    continue;
                }
                count += 1;
                for (slot, steps) in errs.iter_mut().zip([10usize, 40, 160]) {
                    let a = integrated_gradients(&m, &x, steps, 0).unwrap();
                    let sum: f64 = a.values.iter().sum();
                    *slot += ((sum - delta) / delta).abs();
                }
            }
        }
        assert!(count > 20);
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "errors {errs:?}");
    }

    #[test]
    fn rescale_pass_on_linear_model_matches_ig() {
        let m = linear_model(&[0.3, -0.8, 2.0], -0.2);
        let x = [0.5, 0.1, -0.9];
        let dl = deeplift_rescale(&m, &x, 0).unwrap();
        let ig = integrated_gradients(&m, &x, 10, 0).unwrap();
        for i in 0..3 {
            assert!((dl.values[i] - ig.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rescale_pass_at_baseline_is_zero() {
        let m = random_model(&[4, 12, 12, 1], 5);
        let a = deeplift_rescale(&m, &[0.0; 4], 0).unwrap();
        assert!(a.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rescale_pass_redistributes_the_output_delta() {
        let mut rng = rng_from_seed(23);
        for seed in 0..20u64 {
            let m = random_model_with_biases(&[5, 20, 20, 1], seed);
            let x: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            let delta = m.forward_eval(&x).unwrap()[0] - m.forward_eval(&[0.0; 5]).unwrap()[0];
            let a = deeplift_rescale(&m, &x, 0).unwrap();
            let sum: f64 = a.values.iter().sum();
            assert!((sum - delta).abs() < 1e-4, "seed {seed}: {sum} vs {delta}");
        }
    }

    #[test]
    fn ablation_matches_symbolic_ground_truth() {
        let func = SymbolicFunction::new(2).unwrap();
        let eval = SymbolicEvaluator::new(func, 4).unwrap();
        let x = [0.5, 0.3, -0.2, 0.9];
        let a = feature_ablation(&eval, &x, None, 0).unwrap();
        assert_eq!(a.values[0], 0.25);
        assert_eq!(&a.values[1..], &[0.0, 0.0, 0.0]);
        let truth = func.ground_truth_fa(&x[..1], &[0.0]).unwrap();
        assert_eq!(a.values[0], truth[0]);
    }

    #[test]
    fn ablation_at_baseline_is_zero() {
        let m = random_model(&[3, 8, 1], 2);
        let a = feature_ablation(&m, &[0.0; 3], None, 0).unwrap();
        assert!(a.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn singleton_groups_equal_ungrouped_ablation() {
        let m = random_model(&[4, 10, 1], 8);
        let x = [0.2, -0.5, 0.8, 0.1];
        let groups: Vec<FeatureGroup> = (0..4)
            .map(|i| FeatureGroup::new(format!("f{i}"), vec![i]))
            .collect();
        let grouped = feature_ablation(&m, &x, Some(&groups), 0).unwrap();
        let plain = feature_ablation(&m, &x, None, 0).unwrap();
        assert_eq!(grouped.values, plain.values);
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        let m = random_model(&[3, 4, 1], 0);
        let groups = [
            FeatureGroup::new("a", vec![0, 1]),
            FeatureGroup::new("b", vec![1, 2]),
        ];
        assert!(matches!(
            feature_ablation(&m, &[0.1, 0.2, 0.3], Some(&groups), 0),
            Err(Error::InvalidGroup(_))
        ));
    }

    #[test]
    fn group_importance_shares() {
        let a = AttributionVector::new(
            vec![1.0, -1.0, 0.5, 0.5],
            AttributionMethod::Sa,
            0,
        );
        let groups = [
            FeatureGroup::new("a", vec![0, 1]),
            FeatureGroup::new("b", vec![2, 3]),
        ];
        let shares = aggregate_group_importance(&a, &groups).unwrap();
        assert!((shares[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((shares[1] - 1.0 / 3.0).abs() < 1e-15);

        let lopsided = AttributionVector::new(vec![0.0, 2.0, 0.0, 0.0], AttributionMethod::Sa, 0);
        assert_eq!(aggregate_group_importance(&lopsided, &groups).unwrap(), vec![1.0, 0.0]);

        let uniform = AttributionVector::new(vec![0.5; 4], AttributionMethod::Sa, 0);
        assert_eq!(aggregate_group_importance(&uniform, &groups).unwrap(), vec![0.5, 0.5]);

        let zero = AttributionVector::new(vec![0.0; 4], AttributionMethod::Sa, 0);
        assert_eq!(aggregate_group_importance(&zero, &groups).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn group_importance_requires_a_partition() {
        let a = AttributionVector::new(vec![1.0, 2.0, 3.0], AttributionMethod::Sa, 0);
        let gap = [FeatureGroup::new("a", vec![0, 1])];
        assert!(matches!(
            aggregate_group_importance(&a, &gap),
            Err(Error::InvalidGroup(_))
        ));
    }

    #[test]
    fn topk_ordering_and_ties() {
        let a = AttributionVector::new(vec![0.1, -0.9, 0.5], AttributionMethod::Sa, 0);
        assert_eq!(topk_features(&a, 2).unwrap(), vec![1, 2]);
        assert_eq!(topk_features(&a, 3).unwrap(), vec![1, 2, 0]);

        let tied = AttributionVector::new(vec![0.5, 0.5], AttributionMethod::Sa, 0);
        assert_eq!(topk_features(&tied, 1).unwrap(), vec![0]);

        assert!(topk_features(&a, 0).is_err());
        assert!(topk_features(&a, 4).is_err());
    }

    #[test]
    fn ig_matches_path_oracle_on_single_feature_functions() {
        // With one predictive feature the path oracle telescopes to
        // f(x) - f(0); a fine midpoint quadrature must agree closely.
        for id in 1..=6u8 {
            let func = SymbolicFunction::new(id).unwrap();
            let eval = SymbolicEvaluator::new(func, 1).unwrap();
            for &x in &[-0.8, -0.3, 0.45, 0.9] {
                let ours = integrated_gradients(&eval, &[x], 1000, 0).unwrap();
                let oracle = func.ground_truth_ig(&[x], &[0.0], 10).unwrap();
                assert!(
                    (ours.values[0] - oracle[0]).abs() < 1e-6,
                    "id {id} at {x}: {} vs {}",
                    ours.values[0],
                    oracle[0]
                );
            }
        }
    }

    proptest! {
        #[test]
        fn topk_is_invariant_under_positive_scaling(
            values in proptest::collection::vec(-10.0f64..10.0, 2..12),
            scale in 0.01f64..100.0,
            k_frac in 0.0f64..1.0,
        ) {
            let n = values.len();
            let k = 1 + ((n - 1) as f64 * k_frac) as usize;
            let a = AttributionVector::new(values.clone(), AttributionMethod::Sa, 0);
            let scaled = AttributionVector::new(
                values.iter().map(|v| v * scale).collect(),
                AttributionMethod::Sa,
                0,
            );
            prop_assert_eq!(topk_features(&a, k).unwrap(), topk_features(&scaled, k).unwrap());
        }

        #[test]
        fn group_shares_are_a_distribution(
            values in proptest::collection::vec(-5.0f64..5.0, 6),
        ) {
            let a = AttributionVector::new(values, AttributionMethod::Fa, 0);
            let groups = [
                FeatureGroup::new("a", vec![0, 1, 2]),
                FeatureGroup::new("b", vec![3]),
                FeatureGroup::new("c", vec![4, 5]),
            ];
            let shares = aggregate_group_importance(&a, &groups).unwrap();
            prop_assert!(shares.iter().all(|&s| s >= 0.0));
            prop_assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
