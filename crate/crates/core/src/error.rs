use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input to a pure operation.
    #[error("rejected input: {0}")]
    Rejected(String),

    #[error("{kind} `{name}` is not in the catalog; available: {}", available.join(", "))]
    NotInCatalog {
        kind: &'static str,
        name: String,
        available: Vec<String>,
    },

    /// A required hypothesis (connected isotropy, n >= 3, ...) does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
}

impl Error {
    pub(crate) fn rejected(msg: impl Into<String>) -> Self {
        Error::Rejected(msg.into())
    }
}
