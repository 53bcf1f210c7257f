use thiserror::Error;

/// Errors raised by the engine.
///
/// Validation errors describe malformed input; refusals describe well-formed
/// requests the engine declines because the answer would not be finite or
/// not be validated (see [`EngineError::is_refusal`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix has signature ({positive}, {negative}, {zero}); expected (1, {expected_negative}, 0)")]
    BadSignature {
        positive: usize,
        negative: usize,
        zero: usize,
        expected_negative: usize,
    },
    #[error("class is not ample: {0}")]
    NotAmple(String),
    #[error("c1 must have integer coordinates")]
    NonIntegralC1,
    #[error("c2 must be an integer here, got {0}")]
    NonIntegralC2(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("m must be positive")]
    NonPositiveParameter,
    #[error("operation requires nonzero rank")]
    RankZero,
    #[error("operation requires positive rank")]
    RankNotPositive,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("refused: {0}")]
    Unbounded(String),
    #[error("refused: lattice rank {0} exceeds 2")]
    LatticeRankTooLarge(usize),
}

impl EngineError {
    /// True when the input is valid but the engine declines to compute.
    pub fn is_refusal(&self) -> bool {
        matches!(self, EngineError::Unbounded(_) | EngineError::LatticeRankTooLarge(_))
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
