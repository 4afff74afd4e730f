use thiserror::Error;

/// Position-tagged failure from the scalar text parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("shape violation at ({row}, {col}): {message}")]
    ShapeViolation {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An accumulator referenced a coefficient the sweep has not produced yet.
    #[error("sequencing error: {0}")]
    Sequencing(String),

    /// An exact post-condition did not hold. Indicates a bug, never bad input.
    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
