use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("expected a class of degree {expected}, found a term of degree {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("odd adjoint number {0}: not a sectional genus")]
    OddAdjoint(i64),

    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),

    #[error("invalid splitting type: {0}")]
    InvalidSplitting(String),

    #[error("operation requires {0}")]
    Precondition(String),

    #[error("truncation length k = {k} outside 2..={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("unsupported sectional genus {0} (only g = 3 is classified)")]
    UnsupportedGenus(i64),

    #[error("vector of length {found} does not match lattice dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} out of range")]
    OutOfRange(String),

    #[error("enumeration is unbounded: {0}")]
    Unbounded(String),

    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown table id `{0}`")]
    UnknownTable(String),

    #[error("row `{row}`: {message}")]
    Schema { row: String, message: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Checked arithmetic helpers that turn wraparound into [`Error::Overflow`].
pub(crate) trait Checked: Sized {
    fn add_c(self, rhs: Self, what: &'static str) -> Result<Self>;
    fn mul_c(self, rhs: Self, what: &'static str) -> Result<Self>;
}

impl Checked for i64 {
    fn add_c(self, rhs: i64, what: &'static str) -> Result<i64> {
        self.checked_add(rhs).ok_or(Error::Overflow(what))
    }

    fn mul_c(self, rhs: i64, what: &'static str) -> Result<i64> {
        self.checked_mul(rhs).ok_or(Error::Overflow(what))
    }
}
