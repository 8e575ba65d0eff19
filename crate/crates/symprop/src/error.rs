use std::path::PathBuf;

use thiserror::Error;

/// Failures of the experiment runner. Each maps to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("failed to parse config: {0}")]
    ConfigSyntax(#[from] toml::de::Error),
    #[error(transparent)]
    Core(#[from] symprop_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigSyntax(_) => EXIT_CONFIG,
            CliError::Core(e) => core_exit_code(e),
            CliError::Assertion(_) => EXIT_ASSERTION,
            _ => EXIT_FAILURE,
        }
    }

    /// Stable machine-readable tag for structured error output.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_BUDGET => "budget_exceeded",
            EXIT_ASSERTION => "assertion",
            _ => "runtime",
        }
    }
}

fn core_exit_code(e: &symprop_core::Error) -> i32 {
    use symprop_core::Error as E;
    match e {
        E::BudgetExceeded { .. } => EXIT_BUDGET,
        E::EstimatorFailed { source, .. } => core_exit_code(source),
        E::InvalidDistribution(_)
        | E::DimensionMismatch { .. }
        | E::InvalidArgument(_)
        | E::InvalidProfile(_)
        | E::UnknownProperty(_)
        | E::NotInPacking(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}
