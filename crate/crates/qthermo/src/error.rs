//! Error type shared by the whole crate.

/// Everything fallible in this crate returns this alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input rejected before any computation: wrong shape, broken type
    /// invariant, malformed serialization.
    #[error("validation: {0}")]
    Validation(String),

    /// Input is well-formed but outside the operation's domain
    /// (entropy target out of range, non-commuting pair, index overflow).
    #[error("domain: {0}")]
    Domain(String),

    /// A numerical routine failed to meet its contract.
    #[error("numerical: {0}")]
    Numerical(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
