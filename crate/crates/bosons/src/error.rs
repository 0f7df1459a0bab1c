//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An integer quantity does not fit in 64 bits.
    #[error("integer overflow computing {what} (n={n}, m={m})")]
    Overflow { what: &'static str, n: u32, m: u32 },

    /// Two tensors do not share the same (n, m) shape.
    #[error("shape mismatch: ({n_left},{m_left}) vs ({n_right},{m_right})")]
    ShapeMismatch {
        n_left: u32,
        m_left: u32,
        n_right: u32,
        m_right: u32,
    },

    /// A multi-index entry is outside 1..=n.
    #[error("multi-index entry {entry} out of range 1..={n}")]
    EntryOutOfRange { entry: u32, n: u32 },

    /// Multi-index entries are not nondecreasing.
    #[error("multi-index entries are not nondecreasing")]
    NotNondecreasing,

    /// A lexicographic rank is outside 0..dim.
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: u64, dim: u64 },

    /// Dimension/mode parameters invalid for the operation.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Full expansion would exceed the configured cap.
    #[error("full expansion needs {needed} coefficients, cap is {cap}")]
    ExpansionCap { needed: u128, cap: u64 },

    /// Coefficient vector length does not match the symmetric dimension.
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: u64 },

    /// The zero tensor has no spectral witness.
    #[error("tensor is zero")]
    ZeroTensor,

    /// A non-finite value appeared during iteration.
    #[error("non-finite value encountered in restart {restart}")]
    NonFinite { restart: usize },

    /// A state that must be unit-norm is not.
    #[error("norm {norm} is not unit within {tol}")]
    NotUnitNorm { norm: f64, tol: f64 },

    /// Operation only implemented for a restricted dimension.
    #[error("unsupported for n={n}: {reason}")]
    Unsupported { n: u32, reason: &'static str },

    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A net would exceed the configured memory guard.
    #[error(
        "epsilon-net for n={n}, eps={eps} predicts {predicted} points, guard is {guard} \
         (increase the guard or use a larger eps)"
    )]
    NetTooLarge {
        n: u32,
        eps: f64,
        predicted: u64,
        guard: u64,
    },

    /// I/O failure wrapped with the offending path.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an I/O error with the path it concerns.
    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
