use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed scenario, invalid parameters or unusable input state.
    #[error("input error: {0}")]
    Input(String),
    /// The dynamical map was singular where a result was required.
    #[error("singular map: {0}")]
    Singular(String),
    /// A runtime consistency check failed.
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Singular(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<corrdyn::Error> for CliError {
    fn from(e: corrdyn::Error) -> Self {
        use corrdyn::Error as E;
        match e {
            E::SingularMap { .. } | E::SingularTime(_) => CliError::Singular(e.to_string()),
            E::ReconstructionFailure(_) | E::GeneratorMismatch { .. } | E::EigenFailure => {
                CliError::Invariant(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
