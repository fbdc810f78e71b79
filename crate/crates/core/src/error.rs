use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input for `{0}`")]
    NonFinite(&'static str),

    #[error("`{param}` = {value} is outside its domain ({expected})")]
    Domain {
        param: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("problem size {needed} exceeds the limit {limit}")]
    SizeGuard { needed: u64, limit: u64 },

    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("covariance is not positive definite even with jitter {max_jitter:e}")]
    NotPositiveDefinite { max_jitter: f64 },

    #[error("weight sequence is not summable")]
    NotSummable,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn ensure_finite(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}
