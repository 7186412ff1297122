//! Error type shared by all modules of the crate.

use num_bigint::BigInt;
use thiserror::Error;

use crate::pair::Pair;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(BigInt),

    #[error("rank and degree must be positive, got ({n};{d})")]
    InvalidPair { n: BigInt, d: BigInt },

    #[error("pair {pair} violates the window n(g-1) < d < ng for genus {genus}")]
    NotInWindow { pair: Pair, genus: BigInt },

    #[error("pair {pair} lies outside the reduction domain for genus {genus}")]
    OutsideDomain { pair: Pair, genus: BigInt },

    #[error("rank must be at least 1, got {0}")]
    InvalidRank(BigInt),

    #[error("target {0} must be in-window or the terminal line pair")]
    InvalidReductionTarget(Pair),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix must not be empty")]
    EmptyMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("omega matrix is not generic: column block {block} is singular")]
    NonGenericOmega { block: usize },

    #[error("projective configuration needs at least one point")]
    EmptyConfiguration,

    #[error("point {index} has {found} coordinates, expected {expected}")]
    BadPointLength {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("point {index} is the zero vector")]
    ZeroPoint { index: usize },

    #[error("line {line}, column {column}: malformed rational token `{token}`")]
    MalformedRational {
        line: usize,
        column: usize,
        token: String,
    },

    #[error("line {line}: row has {found} entries, expected {expected}")]
    RaggedCsvRow {
        line: usize,
        expected: usize,
        found: usize,
    },
}
