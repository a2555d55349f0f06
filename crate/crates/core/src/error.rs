use thiserror::Error;

/// Errors raised by the exact algebra kernels and the classifiers built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is singular")]
    Singular,
    /// The input lies outside the hypotheses a routine relies on.
    #[error("regime error: {0}")]
    Regime(String),
    #[error("resource limit reached: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported fiber dimension {0} (supported: 1..=3)")]
    UnsupportedDimension(usize),
    /// A certificate failed exact re-verification. Always a bug.
    #[error("certificate failed verification: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
