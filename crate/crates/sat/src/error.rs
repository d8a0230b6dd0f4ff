use thiserror::Error;

#[derive(Debug, Error)]
pub enum SatError {
    #[error("literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { literal: i64, num_vars: usize },
    #[error("assumptions contain both {0} and its negation")]
    ContradictoryAssumptions(i64),
    #[error("brute force supports at most {max} variables, got {got}")]
    TooManyVariables { got: usize, max: usize },
    #[error("DIMACS parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("external solver: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
