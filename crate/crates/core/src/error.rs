use ci_lp::LpError;
use ci_sat::SatError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CiError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable index {index} outside ground set of size {n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("invalid variable label `{0}`")]
    InvalidLabel(String),
    #[error("duplicate variable label `{0}`")]
    DuplicateLabel(String),
    #[error("ground set of size {0} exceeds the supported maximum of 12")]
    GroundTooLarge(usize),
    #[error("sets overlap: {0}")]
    Overlap(String),
    #[error("statement index {index} out of range for {size} statements")]
    StatementOutOfRange { index: usize, size: usize },
    #[error("models live over different ground sets")]
    GroundMismatch,
    #[error("variable map is not {0}")]
    BadMap(&'static str),
    #[error("ground set does not contain `{0}`")]
    NotSuperset(String),
    #[error("models are not consonant on their shared variables")]
    NotConsonant,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("model is not a member of the {0} family")]
    NotMember(String),
    #[error("set function is not supermodular: {0}")]
    NotSupermodular(String),
    #[error("enumeration stopped after {0} models (cap reached)")]
    CapExceeded(u64),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CiError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> CiError {
        CiError::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = CiError> = std::result::Result<T, E>;
