use thiserror::Error;

/// Library-wide error type.
///
/// `Domain` errors carry a stable machine-readable `name` so that callers
/// (in particular the CLI) can map failures to exit codes and error objects
/// without string matching on the human-readable detail.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error ({name}): {detail}")]
    Domain { name: &'static str, detail: String },

    #[error("unsupported scalar regime: {0}")]
    Regime(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("numerical failure ({name}): {detail}")]
    Numeric { name: &'static str, detail: String },
}

impl Error {
    pub fn domain(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            name,
            detail: detail.into(),
        }
    }

    pub fn numeric(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            name,
            detail: detail.into(),
        }
    }

    /// Stable short name used in CLI error objects.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape-mismatch",
            Error::Domain { name, .. } => name,
            Error::Regime(_) => "unsupported-regime",
            Error::Schema(_) => "schema",
            Error::Numeric { name, .. } => name,
        }
    }

    /// Schema errors are the caller's fault (malformed input documents);
    /// everything else is a domain/numeric failure of the requested operation.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
