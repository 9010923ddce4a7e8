use thiserror::Error;

/// Failure of a subcommand, carrying the exit-code class.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config, or parameters outside a function's domain.
    #[error("{0}")]
    Usage(String),
    /// The computation ran but a check failed or a system was singular.
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }
}

impl From<hyperhelm::Error> for CliError {
    fn from(e: hyperhelm::Error) -> Self {
        use hyperhelm::Error as E;
        match e {
            E::Domain(_) | E::Invalid(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            E::Overflow(_) | E::Singular(_) => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
