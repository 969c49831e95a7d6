use thiserror::Error;

/// Errors produced by the group, hypergraph and experiment engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} exceeds the cap of {limit}")]
    CapExceeded { what: String, limit: u128 },

    /// A generator of the candidate group does not preserve the hypergraph.
    #[error("generator {index} of the group is not an automorphism of the hypergraph")]
    NotContained { index: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors caused by a configurable resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::DegreeCap { .. } | Error::CapExceeded { .. })
    }

    pub(crate) fn cap(what: impl Into<String>, limit: impl TryInto<u128>) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit: limit.try_into().unwrap_or(u128::MAX),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
