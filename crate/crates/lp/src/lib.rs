//! Exact linear feasibility: rationals with a machine-word fast path and a
//! phase-one simplex using Bland's rule.

mod rational;
mod simplex;

pub use rational::{ParseRationalError, Rational};
pub use simplex::{find_feasible_point, Constraint, FeasibilityProblem, Relation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("variable {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("internal solver error: {0}")]
    Internal(String),
}
