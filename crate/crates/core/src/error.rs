use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix does not have full column rank; dependent columns {dependent_columns:?}")]
    Rank { dependent_columns: Vec<usize> },
    #[error("matrix is singular")]
    Singular,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("not a simplex: {0}")]
    NotSimplex(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dynamic programming table needs {required} entries, limit is {limit}")]
    TableTooLarge { required: u128, limit: u128 },
    #[error("value out of machine range: {0}")]
    Overflow(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Rank { .. } => "rank",
            Error::Singular => "singular",
            Error::Shape(_) => "shape",
            Error::Contract(_) => "contract",
            Error::NotSimplex(_) => "not-a-simplex",
            Error::Parse { .. } => "parse",
            Error::TableTooLarge { .. } => "table-too-large",
            Error::Overflow(_) => "overflow",
            Error::Invariant(_) => "invariant",
        }
    }

    pub(crate) fn overflow() -> Self {
        Error::Overflow("intermediate values exceed 64-bit table arithmetic".into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
