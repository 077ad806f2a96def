use thiserror::Error;

/// Errors raised while loading data, evaluating models or running experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("invalid split: train_count {train_count} must be in 1..{len}")]
    Split { train_count: usize, len: usize },

    #[error("{kind} expects {expected} coefficients, got {actual}")]
    Dimension {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("project {id}: model evaluation produced a non-finite value")]
    NonFinite { id: u32 },

    #[error("length mismatch: {actual} actual vs {predicted} predicted values")]
    LengthMismatch { actual: usize, predicted: usize },

    #[error("{metric} requires at least {min} values, got {len}")]
    TooShort {
        metric: &'static str,
        min: usize,
        len: usize,
    },

    #[error("mmre undefined: actual value at index {index} is zero")]
    ZeroActual { index: usize },

    #[error("{metric} undefined: actual values have zero variance")]
    ZeroVariance { metric: &'static str },

    #[error("invalid search space: {0}")]
    Space(String),

    #[error("invalid optimizer configuration: {0}")]
    Config(String),

    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
