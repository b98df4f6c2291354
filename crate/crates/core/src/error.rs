use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: {len} samples, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("{requested} decomposition levels requested, at most {max} feasible for length {len}")]
    TooManyLevels {
        requested: usize,
        max: usize,
        len: usize,
    },

    #[error("inconsistent wavelet decomposition: {0}")]
    InconsistentDecomposition(String),

    #[error("support has {support} nonzero positions but {values} values were given")]
    SupportMismatch { support: usize, values: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("configuration: {0}")]
    Config(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
