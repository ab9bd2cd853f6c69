use thiserror::Error;

/// Errors raised by the library. Symbol indices in messages are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),

    #[error("adjacency matrix is not primitive (no positive power up to N = {bound})")]
    NotPrimitive { bound: usize },

    #[error("symbol {symbol} out of range 1..={q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("inadmissible transition {from} -> {to} at position {position}")]
    Inadmissible {
        position: usize,
        from: usize,
        to: usize,
    },

    #[error("word is not cyclically admissible: transition {last} -> {first} forbidden")]
    NotCyclic { last: usize, first: usize },

    #[error("matrix is singular or too ill-conditioned (condition number {cond:e})")]
    Singular { cond: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("no connecting word of length <= {max_len} for junction {junction}: {left} -> {right}")]
    MissingConnection {
        junction: usize,
        left: String,
        right: String,
        max_len: usize,
    },

    #[error("bowen root search failed: {0}")]
    RootSearch(String),

    #[error("spec file error at line {line}, column {column}: {message}")]
    SpecFile {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
