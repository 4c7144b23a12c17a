use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chain did not mix within {0} steps")]
    NotMixing(usize),
    #[error("hitting time diverges: {0}")]
    Divergent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Capacity(_) => "capacity",
            Error::Argument(_) => "argument",
            Error::Validation(_) => "validation",
            Error::UnsupportedGate(_) => "unsupported-gate",
            Error::Parse { .. } => "parse",
            Error::NotMixing(_) => "not-mixing",
            Error::Divergent(_) => "divergent",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
