use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("value length {len} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },

    #[error("non-finite value {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("negative entry {value} at ({row}, {col}) where nonnegative values are required")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("mixing weight {value} at ({row}, {col}) is outside [0, 1]")]
    AlphaOutOfRange { row: usize, col: usize, value: f64 },

    #[error("degenerate entry at ({row}, {col}): max-times and standard products coincide")]
    DegenerateEntry { row: usize, col: usize },

    #[error("entry {value} at ({row}, {col}) lies outside the bracket [{lo}, {hi}]")]
    OutOfBracket {
        row: usize,
        col: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("relative error undefined: reference matrix has zero Frobenius norm")]
    ZeroNormReference,

    #[error("input must be at least 2x2 for parameter initialization (got {rows}x{cols})")]
    DegenerateInit { rows: usize, cols: usize },

    #[error("rank {k} exceeds min(rows, cols) = {limit}")]
    RankTooLarge { k: usize, limit: usize },

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
