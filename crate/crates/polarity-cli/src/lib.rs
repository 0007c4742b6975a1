//! File formats, document conversions, DOT export and output rendering for
//! the `polarity` binary.

pub mod document;
pub mod dot;
pub mod output;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Semantic(String),
    Validation(String),
    Capacity(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Semantic(m) => write!(f, "semantic error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Capacity(m) => write!(f, "capacity exceeded: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) | CliError::Parse(_) | CliError::Semantic(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }

    pub fn from_core(e: polarity_core::Error) -> Self {
        match e {
            polarity_core::Error::CapacityExceeded { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
