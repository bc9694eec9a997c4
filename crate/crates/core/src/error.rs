use thiserror::Error;

/// Errors produced by the library. All mathematical failure modes that are
/// part of a result (e.g. "not a Carmichael number") are encoded in verdict
/// types, not here; this type is for contract violations only.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input is outside the documented range of an oracle or helper.
    #[error("out of supported range: {0}")]
    Range(String),
    /// An internal invariant that should be unreachable was violated.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn range<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Range(msg.into()))
}
