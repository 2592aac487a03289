use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] scp_anneal::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 I/O, 2 invalid input, 3 infeasible, 4 capacity, 5 verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Verification(_) => 5,
            CliError::Input(_) | CliError::Json(_) => 2,
            CliError::Csv(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_context(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}
