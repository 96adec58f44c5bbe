use thiserror::Error;

/// Errors raised by construction and verification routines.
///
/// `Structural` covers malformed inputs (ragged tables, empty subsets, bad
/// labels); `Domain` covers well-formed inputs outside an operation's
/// admissible range (a parameter out of range, a non-distinct triple).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
