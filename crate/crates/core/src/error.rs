use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// The variants line up with the CLI exit-code classes, see [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("capacity exceeded: {what} = {value} (limit {limit})")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("integration failure at t = {time}: norm drift {drift:e} exceeds {bound:e}")]
    IntegrationFailure { time: f64, drift: f64, bound: f64 },

    #[error("target probability {target} not reached for T <= {t_max}; best seen T = {best_t}, p = {best_p}")]
    NotFound {
        target: f64,
        t_max: u64,
        best_t: u64,
        best_p: f64,
    },

    #[error("target unreachable: {0}")]
    Unreachable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code for this error class.
    ///
    /// 2 invalid input, 3 infeasible, 4 capacity. Verification failures (5)
    /// are results rather than errors and are mapped by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) | Error::Unreachable(_) | Error::NotFound { .. } => 3,
            Error::Capacity { .. } => 4,
            Error::IntegrationFailure { .. } => 5,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
