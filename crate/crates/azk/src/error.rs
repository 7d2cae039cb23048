use thiserror::Error;

/// Everything that ends a command with status `error` and exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] azk_core::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Json(_) => "E_JSON",
            CliError::Schema(_) => "E_SCHEMA",
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
            CliError::UnknownSuite(_) => "E_UNKNOWN_SUITE",
            CliError::Core(e) => e.code(),
        }
    }

    /// `CODE: message`, distinct per code.
    pub fn diagnostic(&self) -> String {
        format!("{}: {}", self.code(), self)
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}
