use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),

    /// A config field violates one of its invariants.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// An RS interval lies outside its admissible range.
    #[error("{name} = {value} outside [{min}, {max}]")]
    IntervalOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("pattern not identifiable: need at least 2 RS positions per axis (N = {n}, M = {m})")]
    Identifiability { n: usize, m: usize },

    #[error("singular Fisher information matrix (determinant {alpha:e})")]
    SingularFim { alpha: f64 },

    #[error("closed form undefined: {0} must be positive")]
    NonPositiveDenominator(&'static str),

    /// Frequency arguments or spectral supports outside the error-filter validity region.
    #[error("outside error-filter validity region: {0}")]
    ValidityRegion(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("target outside unambiguous window: {0}")]
    Ambiguity(String),

    #[error("no feasible design: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
