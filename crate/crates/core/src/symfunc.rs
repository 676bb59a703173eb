//! Closed-form generator functions with analytic gradients and ground-truth
//! attribution oracles.
//!
//! Fifteen scalar-valued functions of 1 to 10 variables, built from
//! polynomial, trigonometric, exponential, and logarithmic primitives. All
//! are finite and smooth on `[-1, 1]^m`, which is where synthetic feature
//! values live. Each function knows its exact gradient, its per-feature
//! ablation delta against a baseline, and the path-summed ablation delta,
//! so attribution methods can be scored against exact references.

use crate::error::{Error, Result};

/// Number of generator functions.
pub const FUNCTION_COUNT: u8 = 15;

/// One of the 15 closed-form generator functions, identified by `1..=15`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct SymbolicFunction {
    id: u8,
}

impl SymbolicFunction {
    /// Looks up a function by id.
    pub fn new(id: u8) -> Result<Self> {
        if (1..=FUNCTION_COUNT).contains(&id) {
            Ok(Self { id })
        } else {
            Err(Error::UnknownFunction(id))
        }
    }

    /// Iterates over all 15 functions in id order.
    pub fn all() -> impl Iterator<Item = Self> {
        (1..=FUNCTION_COUNT).map(|id| Self { id })
    }

    pub fn id(self) -> u8 {
        self.id
    }

    /// Number of input variables.
    pub fn arity(self) -> usize {
        match self.id {
            1..=6 => 1,
            7 => 2,
            8 => 3,
            9 => 4,
            10 => 5,
            11 => 6,
            12 => 7,
            13 => 8,
            14 => 9,
            15 => 10,
            _ => unreachable!(),
        }
    }

    fn check_arity(self, x: &[f64]) -> Result<()> {
        if x.len() != self.arity() {
            return Err(Error::ShapeMismatch {
                expected: self.arity(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Evaluates the function at `x`.
    pub fn evaluate(self, x: &[f64]) -> Result<f64> {
        self.check_arity(x)?;
        Ok(match self.id {
            1 => x[0],
            2 => x[0] * x[0],
            3 => 2.0 / (x[0] * x[0] + 1.0) - 1.0,
            4 => x[0].sin(),
            5 => x[0].exp() - 1.5,
            6 => 2.0 * (x[0] * x[0] + 1.0).ln() - 1.0,
            7 => 0.25 * x[0].powi(3) + 0.75 * x[1] * x[1],
            8 => 0.5 * x[0].powi(3) + 0.75 * x[1] * x[1] + x[0] * x[2],
            9 => {
                0.5 * x[0].exp() * x[1].sin()
                    - 0.25 * x[3].cos().powi(5) / (x[2] * x[2] + 1.0)
            }
            10 => {
                0.5 * (x[0] - x[1]).powi(2) + 0.2 * (x[2] + x[3] * x[4]).powi(3) - 0.5
            }
            11 => {
                let u = (x[2] - x[3]).powi(2) + 1.0;
                let v = (x[4] + x[5] + 1.0).powi(2) + 1.0;
                0.5 * x[0].cos() * x[1].tan() - u.ln() / v
            }
            12 => {
                0.5 * (x[1] - x[2]).powi(2) / (x[0] * x[0] + 1.0)
                    + x[3].tan() * (x[4] * x[4] + 1.0).ln()
                    + 0.5 * x[5].cos() * x[6].sin()
            }
            // Power series sum_{j=1..8} x_j^j / j over eight distinct inputs.
            13 => (0..8)
                .map(|j| x[j].powi(j as i32 + 1) / (j as f64 + 1.0))
                .sum(),
            14 => {
                0.5 * (x[0] - 1.0) / (x[1] * x[1] + 1.0)
                    - 0.5 * x[2].powi(3) / (x[3] * x[3] + 1.0)
                    + 0.5 * x[4].powi(5) / (x[5] * x[5] + 1.0)
                    - 0.5 * x[6].powi(7) / (x[7] * x[7] + 1.0)
                    + 0.5 * x[8].tan()
                    + 0.5
            }
            15 => {
                0.5 * x[0].sin() - 0.5 * x[1].powi(3) - (x[2] * x[2] + 1.0).ln()
                    + 0.5 * ((x[3] + x[4]).powi(2) + 1.0).sqrt()
                    - 0.5 * x[5].cos() * x[6]
                    + x[7] * x[8] * x[8] / ((1.0 - x[9]).powi(2) + 1.0)
                    - 0.5
            }
            _ => unreachable!(),
        })
    }

    /// Evaluates the closed-form gradient at `x`.
    pub fn gradient(self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_arity(x)?;
        Ok(match self.id {
            1 => vec![1.0],
            2 => vec![2.0 * x[0]],
            3 => vec![-4.0 * x[0] / (x[0] * x[0] + 1.0).powi(2)],
            4 => vec![x[0].cos()],
            5 => vec![x[0].exp()],
            6 => vec![4.0 * x[0] / (x[0] * x[0] + 1.0)],
            7 => vec![0.75 * x[0] * x[0], 1.5 * x[1]],
            8 => vec![1.5 * x[0] * x[0] + x[2], 1.5 * x[1], x[0]],
            9 => {
                let c2 = x[2] * x[2] + 1.0;
                vec![
                    0.5 * x[0].exp() * x[1].sin(),
                    0.5 * x[0].exp() * x[1].cos(),
                    0.5 * x[2] * x[3].cos().powi(5) / (c2 * c2),
                    1.25 * x[3].cos().powi(4) * x[3].sin() / c2,
                ]
            }
            10 => {
                let d = x[0] - x[1];
                let q = 0.6 * (x[2] + x[3] * x[4]).powi(2);
                vec![d, -d, q, q * x[4], q * x[3]]
            }
            11 => {
                let u = (x[2] - x[3]).powi(2) + 1.0;
                let w = x[4] + x[5] + 1.0;
                let v = w * w + 1.0;
                let dv = u.ln() * 2.0 * w / (v * v);
                vec![
                    -0.5 * x[0].sin() * x[1].tan(),
                    0.5 * x[0].cos() / x[1].cos().powi(2),
                    -2.0 * (x[2] - x[3]) / (u * v),
                    2.0 * (x[2] - x[3]) / (u * v),
                    dv,
                    dv,
                ]
            }
            12 => {
                let a2 = x[0] * x[0] + 1.0;
                let bc = x[1] - x[2];
                vec![
                    -x[0] * bc * bc / (a2 * a2),
                    bc / a2,
                    -bc / a2,
                    (x[4] * x[4] + 1.0).ln() / x[3].cos().powi(2),
                    x[3].tan() * 2.0 * x[4] / (x[4] * x[4] + 1.0),
                    -0.5 * x[5].sin() * x[6].sin(),
                    0.5 * x[5].cos() * x[6].cos(),
                ]
            }
            13 => (0..8).map(|j| x[j].powi(j as i32)).collect(),
            14 => {
                let b2 = x[1] * x[1] + 1.0;
                let d2 = x[3] * x[3] + 1.0;
                let f2 = x[5] * x[5] + 1.0;
                let h2 = x[7] * x[7] + 1.0;
                vec![
                    0.5 / b2,
                    -(x[0] - 1.0) * x[1] / (b2 * b2),
                    -1.5 * x[2] * x[2] / d2,
                    x[2].powi(3) * x[3] / (d2 * d2),
                    2.5 * x[4].powi(4) / f2,
                    -x[4].powi(5) * x[5] / (f2 * f2),
                    -3.5 * x[6].powi(6) / h2,
                    x[6].powi(7) * x[7] / (h2 * h2),
                    0.5 / x[8].cos().powi(2),
                ]
            }
            15 => {
                let de = x[3] + x[4];
                let root = (de * de + 1.0).sqrt();
                let j2 = (1.0 - x[9]).powi(2) + 1.0;
                vec![
                    0.5 * x[0].cos(),
                    -1.5 * x[1] * x[1],
                    -2.0 * x[2] / (x[2] * x[2] + 1.0),
                    0.5 * de / root,
                    0.5 * de / root,
                    0.5 * x[5].sin() * x[6],
                    -0.5 * x[5].cos(),
                    x[8] * x[8] / j2,
                    2.0 * x[7] * x[8] / j2,
                    2.0 * x[7] * x[8] * x[8] * (1.0 - x[9]) / (j2 * j2),
                ]
            }
            _ => unreachable!(),
        })
    }

    /// Exact per-feature ablation delta against `baseline`:
    /// entry `i` is `f(x) - f(x with x_i replaced by baseline_i)`.
    pub fn ground_truth_fa(self, x: &[f64], baseline: &[f64]) -> Result<Vec<f64>> {
        self.check_arity(x)?;
        self.check_arity(baseline)?;
        let fx = self.evaluate(x)?;
        let mut out = Vec::with_capacity(x.len());
        let mut probe = x.to_vec();
        for i in 0..x.len() {
            let kept = probe[i];
            probe[i] = baseline[i];
            out.push(fx - self.evaluate(&probe)?);
            probe[i] = kept;
        }
        Ok(out)
    }

    /// Path-summed ablation delta over `steps` equal segments of the straight
    /// path from `baseline` to `x`. Each term ablates one coordinate of the
    /// current path point back to the previous path point, so with one step
    /// this reduces to [`Self::ground_truth_fa`], and for single-variable
    /// functions the sum telescopes to `f(x) - f(baseline)` for any step
    /// count.
    pub fn ground_truth_ig(self, x: &[f64], baseline: &[f64], steps: usize) -> Result<Vec<f64>> {
        self.check_arity(x)?;
        self.check_arity(baseline)?;
        if steps < 1 {
            return Err(Error::InvalidParameter(
                "ground-truth path attribution needs at least 1 step".into(),
            ));
        }
        let m = x.len();
        let point = |s: usize| -> Vec<f64> {
            let t = s as f64 / steps as f64;
            (0..m).map(|i| baseline[i] + t * (x[i] - baseline[i])).collect()
        };
        let mut out = vec![0.0; m];
        for s in 1..=steps {
            let current = point(s);
            let previous = point(s - 1);
            let f_cur = self.evaluate(&current)?;
            let mut probe = current.clone();
            for i in 0..m {
                let kept = probe[i];
                probe[i] = previous[i];
                out[i] += f_cur - self.evaluate(&probe)?;
                probe[i] = kept;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Central-difference oracle, independent of `gradient`.
    fn fd_gradient(f: SymbolicFunction, x: &[f64], h: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        let mut probe = x.to_vec();
        for i in 0..x.len() {
            let kept = probe[i];
            probe[i] = kept + h;
            let plus = f.evaluate(&probe).unwrap();
            probe[i] = kept - h;
            let minus = f.evaluate(&probe).unwrap();
            probe[i] = kept;
            out.push((plus - minus) / (2.0 * h));
        }
        out
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
    }

    #[test]
    fn arity_table() {
        let expected = [1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        for (f, want) in SymbolicFunction::all().zip(expected) {
            assert_eq!(f.arity(), want, "id {}", f.id());
        }
    }

    #[test]
    fn unknown_id_rejected() {
        assert!(SymbolicFunction::new(0).is_err());
        assert!(SymbolicFunction::new(16).is_err());
    }

    #[test]
    fn wrong_arity_rejected() {
        let f = SymbolicFunction::new(7).unwrap();
        assert!(f.evaluate(&[1.0]).is_err());
        assert!(f.gradient(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn point_values() {
        let f1 = SymbolicFunction::new(1).unwrap();
        assert_eq!(f1.evaluate(&[0.7]).unwrap(), 0.7);
        let f2 = SymbolicFunction::new(2).unwrap();
        assert_eq!(f2.evaluate(&[-0.5]).unwrap(), 0.25);
        let f7 = SymbolicFunction::new(7).unwrap();
        assert_eq!(f7.evaluate(&[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn point_gradients() {
        let f1 = SymbolicFunction::new(1).unwrap();
        assert_eq!(f1.gradient(&[0.3]).unwrap(), vec![1.0]);
        let f2 = SymbolicFunction::new(2).unwrap();
        assert_eq!(f2.gradient(&[0.5]).unwrap(), vec![1.0]);
        let f7 = SymbolicFunction::new(7).unwrap();
        assert_eq!(f7.gradient(&[1.0, 1.0]).unwrap(), vec![0.75, 1.5]);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = crate::rng::rng_from_seed(1701);
        for f in SymbolicFunction::all() {
            for _ in 0..100 {
                let x: Vec<f64> =
                    (0..f.arity()).map(|_| rng.random_range(-0.9..0.9)).collect();
                let analytic = f.gradient(&x).unwrap();
                let numeric = fd_gradient(f, &x, 1e-6);
                for (i, (&a, &n)) in analytic.iter().zip(&numeric).enumerate() {
                    assert!(
                        rel_err(a, n) < 1e-6,
                        "id {} dim {} at {:?}: analytic {a}, numeric {n}",
                        f.id(),
                        i,
                        x
                    );
                }
            }
        }
    }

    #[test]
    fn ablation_point_values() {
        let f2 = SymbolicFunction::new(2).unwrap();
        assert_eq!(f2.ground_truth_fa(&[0.5], &[0.0]).unwrap(), vec![0.25]);

        // f7(1,1)=1.0; ablating a gives 1-f(0,1)=0.25, ablating b gives 1-f(1,0)=0.75
        let f7 = SymbolicFunction::new(7).unwrap();
        assert_eq!(
            f7.ground_truth_fa(&[1.0, 1.0], &[0.0, 0.0]).unwrap(),
            vec![0.25, 0.75]
        );
    }

    #[test]
    fn ablation_of_baseline_is_zero() {
        for f in SymbolicFunction::all() {
            let x = vec![0.37; f.arity()];
            let got = f.ground_truth_fa(&x, &x).unwrap();
            assert!(got.iter().all(|&v| v == 0.0), "id {}", f.id());
        }
    }

    #[test]
    fn one_step_path_equals_ablation() {
        let mut rng = crate::rng::rng_from_seed(7);
        for f in SymbolicFunction::all() {
            let x: Vec<f64> = (0..f.arity()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let baseline = vec![0.0; f.arity()];
            let fa = f.ground_truth_fa(&x, &baseline).unwrap();
            let ig = f.ground_truth_ig(&x, &baseline, 1).unwrap();
            assert_eq!(fa, ig, "id {}", f.id());
        }
    }

    #[test]
    fn single_feature_path_is_step_independent() {
        // For m=1 the per-step deltas telescope to f(x) - f(baseline) exactly.
        for id in 1..=6 {
            let f = SymbolicFunction::new(id).unwrap();
            let x = [0.62];
            let baseline = [0.0];
            let expected = f.evaluate(&x).unwrap() - f.evaluate(&baseline).unwrap();
            for steps in [1, 2, 10, 137] {
                let got = f.ground_truth_ig(&x, &baseline, steps).unwrap();
                assert!(
                    (got[0] - expected).abs() < 1e-12,
                    "id {id} steps {steps}: {} vs {expected}",
                    got[0]
                );
            }
        }
    }

    #[test]
    fn additive_function_path_sums_to_output_delta() {
        // Formula 13 is a sum of per-feature terms, so the summed path
        // attributions must equal f(x) - f(baseline).
        let f = SymbolicFunction::new(13).unwrap();
        let mut rng = crate::rng::rng_from_seed(99);
        for _ in 0..20 {
            let x: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let baseline = vec![0.0; 8];
            let total =
                f.evaluate(&x).unwrap() - f.evaluate(&baseline).unwrap();
            for steps in [1, 4, 16] {
                let sum: f64 = f.ground_truth_ig(&x, &baseline, steps).unwrap().iter().sum();
                assert!((sum - total).abs() < 1e-12, "steps {steps}");
            }
        }
    }

    #[test]
    fn zero_steps_rejected() {
        let f = SymbolicFunction::new(2).unwrap();
        assert!(f.ground_truth_ig(&[0.5], &[0.0], 0).is_err());
    }
}
