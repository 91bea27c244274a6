use std::path::PathBuf;

use thiserror::Error;

/// Malformed textual input (bit strings, benchmark or parameter specs).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

/// A configuration that violates a parameter invariant. Raised before any
/// fitness evaluation happens.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{name} out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),
}

impl ConfigError {
    pub(crate) fn range(name: &'static str, detail: impl Into<String>) -> Self {
        Self::OutOfRange {
            name,
            detail: detail.into(),
        }
    }
}

/// Failures while persisting or loading experiment results.
#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: line {line}, field {field}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        field: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}
