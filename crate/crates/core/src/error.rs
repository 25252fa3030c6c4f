use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("capacity exceeded: {what} is {size}, limit {limit}")]
    Capacity { what: String, size: u128, limit: u128 },

    #[error("map is not alternating: {0}")]
    NotAlternating(String),

    #[error("seed violates the commutator formula at generator pair ({0}, {1})")]
    CommutatorIncompatible(usize, usize),

    /// Two independent computations that must agree did not.
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn capacity(what: &str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::Capacity {
            what: what.to_string(),
            size,
            limit,
        })
    } else {
        Ok(())
    }
}
