use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module of the crate.
///
/// The variants are grouped by how a caller should react: `BadArgument`,
/// `InvalidDimension`, `IndexOutOfRange`, `NonSquare` and `Parse` are caller
/// mistakes; `Capacity` means the request exceeds a configured or structural
/// size cap and should be surfaced as such (the CLI maps it to its own exit
/// code); `Numerical` and `Internal` indicate the computation itself could
/// not be completed trustworthily and must never be silently swallowed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: n = {n} but at least {min} vertices are required")]
    InvalidDimension { n: u32, min: u32 },

    #[error("bad argument: {0}")]
    BadArgument(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix is not square ({rows} x {cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency violation: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn bad_argument(msg: impl Into<String>) -> Self {
        Error::BadArgument(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
