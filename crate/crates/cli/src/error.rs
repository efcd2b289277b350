use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {reason}")]
    Parse { path: String, line: usize, column: usize, reason: String },
    #[error("{path}: {source}")]
    Validation { path: String, source: bisetkit::Error },
    #[error(transparent)]
    Core(#[from] bisetkit::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    /// 3 for exhausted budgets, 2 for everything else that stops a command.
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Validation { source, .. } | CliError::Core(source) => Some(source),
            _ => None,
        };
        match core {
            Some(bisetkit::Error::BudgetExceeded(_) | bisetkit::Error::SearchBudgetExceeded(_)) => 3,
            _ => 2,
        }
    }
}
