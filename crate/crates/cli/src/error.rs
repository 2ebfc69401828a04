use thiserror::Error;

/// Failures that map to a specific process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("infeasible LP solution: {0}")]
    InfeasibleLp(String),
    #[error("{0} experiment row(s) failed")]
    RowsFailed(usize),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::InfeasibleLp(_) => 4,
            CliError::RowsFailed(_) | CliError::Other(_) => 1,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
