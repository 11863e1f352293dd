use thiserror::Error;

/// Errors produced by the counting, oracle and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The field order is not of the form p^k.
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    /// A computation would exceed the configured size cap.
    #[error("capacity exceeded: {what} needs {needed} but the cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: u64,
        cap: u64,
    },
    /// An arithmetic invariant was violated. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
