use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A flag or model is structurally unusable for the requested operation.
    #[error("flag/model mismatch: {0}")]
    Mismatch(String),

    /// The hypotheses of the complete-intersection construction do not hold.
    #[error("hypothesis mismatch: {0}")]
    Hypothesis(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("search bound exceeded: {0}")]
    SearchBound(String),

    /// An internal runtime guard tripped; indicates a broken invariant.
    #[error("internal guard tripped: {0}")]
    Guard(String),
}

impl Error {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}
