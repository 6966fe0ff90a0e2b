use std::path::Path;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numeric: {0}")]
    Numeric(String),
    #[error("verification failed: {0} check(s) did not pass")]
    VerificationFailed(usize),
}

impl CliError {
    pub fn usage(field: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("{field}: {msg}"))
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Core domain errors inside a named block are usage errors on that
    /// block; everything else is numeric.
    pub fn from_core(field: &str, e: fracmotion_core::Error) -> Self {
        match e {
            fracmotion_core::Error::Domain(msg) => CliError::usage(field, msg),
            other => CliError::Numeric(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::VerificationFailed(_) => EXIT_VERIFICATION_FAILED,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
