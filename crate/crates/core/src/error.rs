use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {col}: {message}")]
    Parse {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("shape error at row {row}: expected {expected} fields, found {found}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dataset needs at least {required} observations, got {actual}")]
    TooFewRows { required: usize, actual: usize },

    #[error("column {column} is constant; cannot scale to unit variance")]
    DegenerateColumn { column: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("series is not sorted in nondecreasing order (first violation at index {index})")]
    NotSorted { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("{method}: {source}")]
    Method { method: String, source: Box<Error> },
}

impl Error {
    /// True for failures that describe the data rather than the caller or the
    /// environment: constant samples, coincident points and the like.
    pub fn is_degeneracy(&self) -> bool {
        match self {
            Error::Method { source, .. } => source.is_degeneracy(),
            _ => matches!(self, Error::DegenerateColumn { .. } | Error::DegenerateData(_)),
        }
    }

    /// True for failures caused by malformed or unusable input data.
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::Method { source, .. } => source.is_data_error(),
            _ => matches!(
                self,
                Error::Parse { .. } | Error::Shape { .. } | Error::TooFewRows { .. } | Error::Io(_)
            ),
        }
    }

    /// The underlying error, with method context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Method { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
