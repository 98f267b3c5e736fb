use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant > 4")]
    NotFundamentalDiscriminant(i128),

    #[error("inexact division in the ring of integers")]
    InexactDivision,

    #[error("the zero element has no associated ideal data")]
    ZeroElement,

    #[error("no unit of norm -1 exists for discriminant {0}")]
    NoNegativeNormUnit(i128),

    #[error("norm {norm} exceeds the factoring bound {bound}")]
    FactorizationOverflow { norm: i128, bound: i128 },

    #[error("{0} is not 1 or a discriminant congruent to 0 or 1 mod 4")]
    BadDiscriminant(i128),

    #[error("discriminant {d} does not satisfy the sign condition for r = {r}")]
    BadDiscriminantParity { r: u32, d: i128 },

    #[error("internal oracle mismatch for {what}: {lhs} != {rhs}")]
    OracleMismatch {
        what: String,
        lhs: String,
        rhs: String,
    },

    #[error("ideal enumeration exceeded norm bound {0}")]
    EnumerationBoundExceeded(i128),

    #[error("conductor of {0} is not an integral ideal (element is outside the supported square classes)")]
    ConductorNotIntegral(String),

    #[error("restriction form is not positive definite")]
    NotPositiveDefinite,

    #[error("degree-one mode does not support weight 3/2 tables")]
    UnsupportedQMode,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
