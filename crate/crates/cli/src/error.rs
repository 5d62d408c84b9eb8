use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Numerical(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<fcurve_core::Error> for CliError {
    fn from(e: fcurve_core::Error) -> Self {
        use fcurve_core::Error as E;
        match e {
            E::Divergence { .. }
            | E::NumericalPsd(_)
            | E::TruncationTooLarge(_)
            | E::Numerical(_) => CliError::Numerical(e.to_string()),
            E::SpecViolation(_) | E::Representation(_) => CliError::Invariant(e.to_string()),
            E::Io(io) => CliError::Io(io),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
