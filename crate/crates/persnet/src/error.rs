//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph construction, analysis and file parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a structural precondition (shape, symmetry, range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A data column has no variance, so a correlation is undefined.
    #[error("column {column} has zero variance")]
    DegenerateColumn { column: usize },

    /// A series is constant (or fully tied), so the statistic is undefined.
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    /// A threshold fell outside the matrix's admissible range.
    #[error("threshold {threshold} outside (0, {cap}]")]
    ThresholdOutOfRange { threshold: f64, cap: f64 },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// An option combination is inconsistent (missing window, bad rank, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A text file failed to parse; positions are 1-based.
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input data rather than bad options.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::DegenerateColumn { .. }
                | Error::DegenerateSeries(_)
                | Error::DimensionMismatch { .. }
                | Error::Parse { .. }
                | Error::Io(_)
        )
    }
}
