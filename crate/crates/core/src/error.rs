use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: vector has {vector} bits but matrix has {rows} rows")]
    DimensionMismatch { vector: usize, rows: usize },

    #[error("bit block length {0} exceeds the 64-bit limit")]
    BlockTooLong(usize),

    #[error("unsupported code ({n}, {k}); expected one of (15,5), (15,7), (15,11)")]
    UnsupportedCode { n: usize, k: usize },

    #[error("source pair violates the correlation constraint: distance {distance} > t = {t}")]
    CorrelationViolation { distance: u32, t: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Serialize { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
