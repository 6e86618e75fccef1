use thiserror::Error;

use crate::spacing::VerifyReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("points do not lie on a common sphere (residual {residual:e})")]
    NoCommonSphere { residual: f64 },

    #[error("input families are not orthonormal/orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("linear system is rank deficient")]
    RankDeficient,

    #[error("no common altitude intersection (residual {residual:e})")]
    NoOrthocenter { residual: f64 },

    #[error("points are not an orthocentric system: {0}")]
    NotOrthocentric(String),

    #[error("spacing failed validation: {0}")]
    Invalid(Box<VerifyReport>),

    #[error("spacing is not maximal: {0}")]
    NotMaximal(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("not glueable: {0}")]
    NotGlueable(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("no real solution (residual {residual:e}): {what}")]
    NoSolution { what: String, residual: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
