use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A closed-form expression hit a non-positive denominator.
    #[error("singularity: {0}")]
    Singular(String),
    /// Too few samples for a statistic to be meaningful.
    #[error("insufficient sample: need at least {needed}, got {got}")]
    InsufficientSample { needed: usize, got: usize },
    /// Exhaustive enumeration requested beyond the supported size.
    #[error("enumeration too large: n = {n} exceeds {max}")]
    TooLarge { n: u32, max: u32 },
    /// A box was queried twice on the same side.
    #[error("box ({level}, {index}) already queried on this side")]
    BoxReused { level: u32, index: usize },
    #[error("estimator undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
