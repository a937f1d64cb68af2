use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label {label} out of range for level {k}")]
    LabelRange { label: u32, k: u32 },
    #[error("{0}")]
    Domain(String),
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short category tag used by machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LabelRange { .. } => "range",
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
