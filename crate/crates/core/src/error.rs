use thiserror::Error;

/// Errors raised by the clustering, evaluation, and synthesis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point has no coordinates")]
    EmptyPoint,

    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no stored point lies within the bandwidth of the query point")]
    EmptyNeighborhood,

    #[error("length mismatch: {left} predictions vs {right} ground-truth labels")]
    LengthMismatch { left: usize, right: usize },

    #[error("label set is not dense: id {missing} in 0..{count} is never used")]
    SparseLabels { missing: usize, count: usize },

    #[error("distribution sums to {sum}, expected 1")]
    NotADistribution { sum: f64 },

    #[error("distribution entry {index} is negative or not finite ({value})")]
    InvalidProbability { index: usize, value: f64 },

    #[error("covariance of class {class} is not symmetric positive definite")]
    NotPositiveDefinite { class: usize },

    #[error("unknown built-in set {0}; valid ids are 1..=7")]
    UnknownSet(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
