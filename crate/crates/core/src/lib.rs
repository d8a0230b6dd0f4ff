//! Abstract conditional-independence structures: statements and models,
//! frame closures via SAT and exact LP, self-adhesion, and lattice
//! catalogues with canonical implicational bases.

pub mod bitset;
pub mod closure;
mod error;
pub mod entropic;
pub mod frames;
pub mod graph;
pub mod ground;
pub mod lattice;
pub mod model;
pub mod perm;
pub mod selfadhesion;
pub mod statement;
pub mod supermodular;

pub use bitset::BitSet;
pub use error::{CiError, Result};
pub use ground::{GroundSet, VarSet};
pub use model::{expand_global, least_adhesion, CIModel, VariableMap};
pub use statement::{index_statement, sta_size, statement_at, statements, Statement};
