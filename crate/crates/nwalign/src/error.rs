//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scoring scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid sequence {id:?}: {msg}")]
    InvalidSequence { id: String, msg: String },

    #[error("alignment grid of {rows} x {cols} cells exceeds addressable size")]
    GridTooLarge { rows: usize, cols: usize },

    #[error("malformed alignment: {0}")]
    MalformedAlignment(String),

    /// Traceback hit a cell whose direction code was never written. This is
    /// an engine bug, not bad input.
    #[error("traceback reached unset cell ({i}, {j}); matrix was not fully filled")]
    UnsetTraceback { i: usize, j: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("FASTA parse error at line {line}: {msg}")]
    FastaParse { line: usize, msg: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("worker rank {rank}: {msg}")]
    Worker { rank: u32, msg: String },

    /// An internal invariant was violated (duplicate results, score drift
    /// between timed and untimed runs, and the like).
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
