use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exponent, element, or count left the representable range.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A bound that the lower-bound argument guarantees did not hold. Never
    /// expected; reported instead of truncating the result.
    #[error("bound violated: {0}")]
    BoundViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn overflow(what: impl Into<String>) -> Error {
    Error::Overflow(what.into())
}
