use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("characteristic polynomial does not split over the rationals")]
    EigenvaluesNotRational,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("defining relation XY - YX = Y^2 fails first at entry ({row},{col}): {lhs} != {rhs}")]
    RelationFails {
        row: usize,
        col: usize,
        lhs: String,
        rhs: String,
    },

    #[error("Y is not nilpotent")]
    YNotNilpotent,

    #[error("parameter count mismatch: expected {expected}, got {got}")]
    ParamCountMismatch { expected: usize, got: usize },

    #[error("span is not closed under multiplication")]
    NotAnAlgebra,

    #[error("generator does not lie in the algebra")]
    GensNotInAlgebra,

    #[error("Y does not have full-block Jordan type (rank Y != n-1)")]
    NotFullBlock,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("parameter must be nonzero")]
    ZeroParameter,

    #[error("isomorphism search inconclusive after {trials} trials")]
    Inconclusive { trials: usize },

    #[error("internal invariance check failed: {0}")]
    InvarianceFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
