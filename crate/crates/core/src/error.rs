use thiserror::Error;

/// Errors raised anywhere in the algebra stack.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("algebra tag mismatch: {left} vs {right}")]
    TagMismatch { left: usize, right: usize },
    #[error("invalid algebra dimension {0} (expected 1, 2, 4 or 8)")]
    InvalidDimension(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("polynomial has nonzero terms beyond degree {0}")]
    DegreeOverflow(usize),
    #[error("sampled points span only {rank} of {dim} dimensions")]
    SpanDeficiency { rank: usize, dim: usize },
    #[error("derived map fails verification on a fresh sample")]
    VerificationFailed,
    #[error("calibration nullspace has dimension {0} (expected 1)")]
    CalibrationAmbiguous(usize),
    #[error("calibration nullspace is empty")]
    CalibrationEmpty,
    #[error("singular point with unexpected Hessian rank {rank}")]
    UnexpectedSignature { rank: usize },
    #[error("sampler gave up after {0} rejections")]
    ResampleLimit(usize),
    #[error("grid certification needs {needed} evaluations, budget is {budget}")]
    InconclusiveZero { needed: u128, budget: u128 },
    #[error("expected a rank-one element, got rank {0}")]
    RankPreconditionViolated(usize),
    #[error("the polar combination requires a nonzero last coordinate")]
    RequiresNonzeroP3,
    #[error("Lie closure exceeded the sanity bound {0}")]
    ClosureDivergence(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
