use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex {vertices:?}: {reason}")]
    MalformedSimplex { vertices: Vec<u32>, reason: &'static str },

    #[error("empty complex")]
    EmptyComplex,

    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<u32>),

    #[error("invalid pair system: {0}")]
    InvalidPairSystem(String),

    #[error("map is not in general position for the pair {sigma:?} / {tau:?}: {reason}")]
    DegeneratePosition {
        sigma: Vec<u32>,
        tau: Vec<u32>,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("digest mismatch: {0}")]
    DigestMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
