//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by dataset synthesis, model training, attribution,
/// feature elimination, and the grid runner.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid target values: {0}")]
    InvalidTarget(String),

    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("invalid feature groups: {0}")]
    InvalidGroup(String),

    #[error("unknown function id {0}, expected 1..=15")]
    UnknownFunction(u8),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("missing sidecar annotation file: {0}")]
    MissingSidecar(PathBuf),

    #[error("unsupported format version {found}, expected {expected}")]
    FormatVersion { expected: u32, found: u32 },

    #[error("failed to parse cell at row {row}, column {column}: {value:?}")]
    CsvCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
