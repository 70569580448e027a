//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("field extension degree must be at least 1")]
    ZeroExtensionDegree,

    #[error("field of order {p}^{f} exceeds the supported limit of 2^16")]
    FieldTooLarge { p: u32, f: u32 },

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("division by the zero polynomial")]
    ZeroPolyDivision,

    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("polynomial is not in F_q[x^p]")]
    NotAPthPower,

    #[error("polynomial has a nonzero coefficient at an index = {0} mod p")]
    NotInPattern(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("comparison against 1 is numerically ambiguous: {0}")]
    AmbiguousComparison(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn too_large(msg: impl Into<String>) -> Self {
        Error::TooLarge(msg.into())
    }
}
