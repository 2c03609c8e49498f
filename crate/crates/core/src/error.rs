use thiserror::Error;

use crate::cone::ConeInequality;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field size q = {0} (only 2 and 3 are supported)")]
    UnsupportedField(u64),

    #[error("entry {value} is not an element of F{q}")]
    InvalidFieldEntry { value: u64, q: u8 },

    #[error("field mismatch: expected F{expected}, found F{found}")]
    FieldMismatch { expected: u8, found: u8 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires F{expected}, but the matrix is over F{found}")]
    WrongField { expected: u8, found: u8 },

    #[error("exhaustive scan needs {needed} evaluations but the bound is {bound}")]
    BoundExceeded { needed: u128, bound: u128 },

    #[error("budget of {budget} evaluations exceeded ({context})")]
    BudgetExceeded { budget: u64, context: String },

    #[error("cover degree must be positive")]
    ZeroDegree,

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("entry ({row}, {col}) = {value} is not a nonnegative integer")]
    NotInteger { row: usize, col: usize, value: String },

    #[error("matrix is not in the fundamental cone ({} violated inequalities)", violated.len())]
    NotInCone { violated: Vec<ConeInequality> },

    #[error("modular syndrome condition fails: residues {residues:?}")]
    SyndromeCondition { residues: Vec<i64> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lift failed at step {step}: {reason}")]
    LiftFailure { step: usize, reason: String, trace: Vec<crate::lift::TraceStep> },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
