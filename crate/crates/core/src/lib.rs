//! Benchmark engine for post-hoc feature attribution on low signal-to-noise
//! tabular data.
//!
//! The crate synthesizes regression datasets from closed-form generator
//! functions with annotated predictive features, trains small fully-connected
//! networks from scratch with exact reverse-mode gradients, runs four local
//! attribution methods (saliency, integrated gradients, a rescale-rule
//! backward pass, and feature ablation), scores them against the annotations,
//! and drives recursive feature elimination with either attribution-based or
//! linear-coefficient importance.
//!
//! Modules:
//! - [`symfunc`]: the 15 generator functions and their exact attribution
//!   oracles.
//! - [`dataset`]: synthesis, persistence, and ingestion of tabular data.
//! - [`nn`]: the multilayer perceptron, training loop, and optimizers.
//! - [`attribution`]: the four attribution methods, top-k, and grouping.
//! - [`metrics`]: uniform score, functional precision, consistency,
//!   convergence area, and plain accuracy/MAE.
//! - [`rfe`]: recursive feature elimination with both estimators.
//! - [`grid`]: the seeded, reproducible benchmark sweep runner.

pub mod attribution;
pub mod dataset;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod nn;
pub mod rfe;
pub mod rng;
pub mod symfunc;

pub use attribution::{
    aggregate_group_importance, attribute_model, deeplift_rescale, feature_ablation,
    integrated_gradients, saliency, topk_features, AttributionMethod, AttributionTarget,
    AttributionVector, Baseline, FeatureGroup, SymbolicEvaluator, DEFAULT_IG_STEPS,
};
pub use dataset::{
    generate_dataset, load_tabular_csv, Balance, FeatureDist, NoiseSpec, Scaling, Split,
    TabularDataset,
};
pub use error::{Error, Result};
pub use grid::{run_grid, GridConfig, GridOutcome, NoiseCondition, ResultRow, RowStatus};
pub use metrics::{
    basic_metrics, consistency, convergence_auc, fprec, uscore, validation_metrics,
    MetricRecord, Task, USCORE_EPS,
};
pub use nn::{
    batch_loss, batch_param_gradient, sigmoid, train, train_with_observer, LossKind, MlpModel,
    Mode, OptimizerKind, TrainConfig, TrainReport,
};
pub use rfe::{
    bi_module_eval, elimination_schedule, rfe_linear, rfewna, Explainer, RfeConfig, RfeIteration,
    RfeResult, Strategy,
};
pub use symfunc::SymbolicFunction;
