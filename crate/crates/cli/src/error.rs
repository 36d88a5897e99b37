use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] rbcd_core::Error),
}

impl CliError {
    pub fn usage(key: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("invalid value for '{key}': {msg}"))
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 1 for usage errors, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 3,
            CliError::Core(rbcd_core::Error::Io { .. } | rbcd_core::Error::Format { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}
