use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by samplers, models, the estimator engine and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("model does not provide {0}")]
    MissingCapability(&'static str),

    #[error("reference density lives on {found} but {expected} is required")]
    ReferenceSpace {
        expected: &'static str,
        found: &'static str,
    },

    #[error("non-finite importance weight {weight} at sample {index} (k = {k}); check that every density is normalized")]
    NonFiniteWeight { k: usize, index: u64, weight: f64 },

    #[error("mismatched power sums: expected k = {expected}, found k = {found}")]
    MismatchedK { expected: usize, found: usize },

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("{0}")]
    Rank(String),

    #[error("Newton iterations for {what} did not converge after {iterations} steps (possible separation in the data)")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("data file {path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("data file not found: {0}")]
    MissingFile(PathBuf),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
