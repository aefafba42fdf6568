use std::fmt;

/// Failure of a command. Usage errors exit with 1, data and contract errors with 2.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Data { contract: &'static str, message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn data(contract: &'static str, message: impl fmt::Display) -> Self {
        Self::Data { contract, message: message.to_string() }
    }

    /// Every violation of a parameter contract, reported together.
    pub fn invalid_config(violations: Vec<String>) -> Self {
        Self::Usage(format!("invalid configuration: {}", violations.join("; ")))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage: {}", m.replace('\n', " ")),
            Self::Data { contract, message } => write!(f, "{contract}: {}", message.replace('\n', " ")),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

/// Returns `Ok` when `violations` is empty.
pub fn check_all(violations: Vec<String>) -> CliResult<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::invalid_config(violations))
    }
}
