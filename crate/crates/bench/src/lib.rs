//! Shared fixtures for the criterion benches: a standard-setup model and
//! dataset at reduced sample count.

use attrbench_core::{
    generate_dataset, MlpModel, Mode, NoiseSpec, SymbolicFunction, TabularDataset,
};

/// Standard-setup model shape on the quadratic generator: 100 noise
/// features, width 100, depth 3.
pub fn standard_model() -> MlpModel {
    let mut model = MlpModel::new(&[101, 100, 100, 100, 1], 0.0, 7).unwrap();
    model.set_mode(Mode::Eval);
    model
}

/// A matching dataset, small enough to keep bench setup quick.
pub fn standard_dataset(n_samples: usize) -> TabularDataset {
    generate_dataset(
        SymbolicFunction::new(2).unwrap(),
        &NoiseSpec::new(100, 0.01, 42),
        n_samples,
        0.8,
    )
    .unwrap()
}
