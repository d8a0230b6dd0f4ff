use std::fmt;
use std::process::ExitCode;

use ci_core::CiError;

/// A failed run and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input or arguments (exit 2).
    Input(String),
    /// Backend failure or resource guard (exit 3).
    Resource(String),
    /// Enumeration cap reached; partial output was written (exit 4).
    Cap(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Cap(_) => 4,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Resource(m) => write!(f, "resource error: {m}"),
            Failure::Cap(m) => write!(f, "cap reached: {m}"),
        }
    }
}

impl From<CiError> for Failure {
    fn from(e: CiError) -> Failure {
        let msg = e.to_string();
        match e {
            CiError::CapExceeded(_) => Failure::Cap(msg),
            CiError::Unsupported(_)
            | CiError::GroundTooLarge(_)
            | CiError::Sat(_)
            | CiError::Lp(_)
            | CiError::Io(_) => Failure::Resource(msg),
            _ => Failure::Input(msg),
        }
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;
