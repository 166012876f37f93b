use std::fmt;

use barron_qha::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotAContraction(_)
            | Error::MaxIterationsExceeded(_)
            | Error::Singular { .. }
            | Error::SingularSymbol(_)
            | Error::ZeroDraw { .. } => CliError::Numeric(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
