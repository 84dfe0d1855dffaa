use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The computation or output failed: exit code 1.
    #[error(transparent)]
    Compute(#[from] qderiv::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Write { .. } => 1,
        }
    }
}
