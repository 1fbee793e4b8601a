//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ShapError>;

#[derive(Debug, Error)]
pub enum ShapError {
    /// Vector or matrix lengths disagree where they must match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A feature, row, or class index is outside the valid range.
    #[error("index {index} out of range ({what} has {len} entries)")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    /// A sampling budget is unusable (zero permutations, zero grid steps, ...).
    #[error("budget error: {0}")]
    Budget(String),

    /// Exact enumeration was requested above the configured feature cap.
    #[error("{arity} features exceed the exact-enumeration cap of {cap} (2^{arity} coalition evaluations)")]
    CapExceeded { arity: usize, cap: usize },

    /// A numeric argument is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is structurally invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A model or dataset document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A computation produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),
}
