use thiserror::Error;

/// Errors raised by the library. Every variant is a contract or input
/// problem; the computations themselves are total.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty interval: lower end {lo} is not below upper end {hi}")]
    EmptyInterval { lo: String, hi: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("index {index} out of range [{lo}, {hi}]")]
    IndexOutOfRange { index: u64, lo: u64, hi: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit: {what} exceeded {limit}")]
    ResourceLimit { what: &'static str, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
