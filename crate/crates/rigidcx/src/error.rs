//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the algebra engine and the command-line front end.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of an operation (shape mismatch, wrong base ring, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation is outside the supported regime.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A window-bounded computation could not determine a requested degree.
    #[error("undetermined: {0}")]
    Undetermined(String),
    /// A chain-level certificate failed to verify.
    #[error("verification failed: {0}")]
    Verification(String),
    /// A required certificate (flatness, chart, monic relation, ...) is missing or invalid.
    #[error("certificate error: {0}")]
    Certificate(String),
    /// A parse error in the declaration language, with 1-based line and column.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A size cap of a brute-force oracle was exceeded.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}

pub(crate) fn undetermined<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Undetermined(msg.into()))
}
