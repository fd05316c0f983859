use thiserror::Error;

/// Errors surfaced by the certification kernels.
///
/// Arithmetic mixing of coefficient fields is a programming error and panics
/// instead; everything a caller can trigger with bad input lands here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate subspace: basis vectors are linearly dependent")]
    DegenerateSubspace,

    #[error("dimension below rho(k): M = {m} < rho({k}) = {rho}")]
    DimensionBelowRho { m: usize, k: usize, rho: usize },

    #[error("point does not lie on the variety: f_{index} does not vanish at it")]
    PointOffVariety { index: usize },

    #[error("tail length {m} exceeds slope sequence length {len}")]
    TailTooLong { m: usize, len: usize },

    #[error("level l_X = {l_x} outside [2, {k}]")]
    LevelOutOfRange { l_x: usize, k: usize },

    #[error("{step} step precondition failed: {inequality}")]
    PrerequisiteViolated { step: String, inequality: String },

    #[error("desk-scale limit: {0}")]
    DeskScaleLimit(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("condition {condition} requires a point of type {expected}, got 2^{actual}")]
    WrongSingularityType {
        condition: String,
        expected: String,
        actual: usize,
    },

    #[error("coefficient denominator divisible by prime {p}")]
    BadPrimeForInput { p: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
