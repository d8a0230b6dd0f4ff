//! Satisfiability backend: an incremental CDCL solver with assumptions,
//! AllSAT enumeration, a brute-force oracle and DIMACS interop.

mod brute;
mod cnf;
pub mod dimacs;
mod engine;
mod enumerate;
mod error;
mod lit;
mod solver;

pub use brute::{brute_force_masks, brute_force_models, BRUTE_FORCE_MAX_VARS};
pub use cnf::Cnf;
pub use engine::{parse_solver_output, EngineKind, ExternalSolver, SatEngine, SOLVER_ENV};
pub use enumerate::{
    enumerate_models, for_each_model, EnumConfig, EnumMethod, Enumeration, DEFAULT_MODEL_CAP,
};
pub use error::SatError;
pub use lit::{Lit, Var};
pub use solver::{Solver, SolverStats};
