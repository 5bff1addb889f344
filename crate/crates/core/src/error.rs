use thiserror::Error;

use crate::exactnum::Rat;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("pole at t0 = {0}")]
    Pole(Rat),
    #[error("singular system (rank {rank})")]
    SingularSystem { rank: usize },
    #[error("coincident sites")]
    CoincidentSites,
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("site index {index} out of range for {len} sites")]
    SiteOutOfRange { index: usize, len: usize },
    #[error("invalid site set: {0}")]
    InvalidSites(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("non-integral coordinates after scaling by {scale}")]
    NonIntegral { scale: u64 },
    #[error("instance too large: {what} = {found} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        found: usize,
        cap: usize,
    },
    #[error("precondition: genericity ({0})")]
    Genericity(String),
    #[error("unsupported dimension n = {0} (rendering needs n = 3)")]
    UnsupportedDimension(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::DimensionMismatch { .. } => 2,
            _ => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Parse(e.to_string())
    }
}
