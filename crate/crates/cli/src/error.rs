use std::fmt;

use outer_weight::Error;

pub const EXIT_CONDITION: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NUMERIC: u8 = 70;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Condition(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Data(_) => EXIT_DATA,
            Self::Condition(_) => EXIT_CONDITION,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage: {m}"),
            Self::Data(m) => write!(f, "bad data: {m}"),
            Self::Condition(m) => write!(f, "condition failure: {m}"),
            Self::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Domain(_) | Error::Capability(_) | Error::OutOfRange(_) => Self::Usage(m),
            Error::Data(_) => Self::Data(m),
            Error::Condition(_) => Self::Condition(m),
            Error::Precision { .. }
            | Error::Consistency { .. }
            | Error::Convergence(_)
            | Error::Evaluation(_) => Self::Numeric(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
