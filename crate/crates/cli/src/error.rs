use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure in {operation}: {source}")]
    Numerical {
        operation: String,
        #[source]
        source: collective_bath::Error,
    },

    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io { .. } | CliError::Output(_) => 1,
        }
    }

    pub(crate) fn numerical(
        operation: impl Into<String>,
    ) -> impl FnOnce(collective_bath::Error) -> Self {
        let operation = operation.into();
        move |source| CliError::Numerical { operation, source }
    }
}
