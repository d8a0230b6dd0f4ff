use crate::{Lit, SatError};

/// A CNF formula over `num_vars` variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Appends a clause after checking that every literal is in range.
    pub fn add_clause(&mut self, clause: Vec<Lit>) -> Result<(), SatError> {
        for &l in &clause {
            if l.var().index() >= self.num_vars {
                return Err(SatError::LiteralOutOfRange {
                    literal: l.to_dimacs(),
                    num_vars: self.num_vars,
                });
            }
        }
        self.clauses.push(clause);
        Ok(())
    }

    /// True when every clause has at most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|l| !l.is_negative()).count() <= 1)
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Sorts literals inside clauses, drops duplicates and tautologies, then
    /// sorts and deduplicates the clause list.
    pub fn normalize(&mut self) {
        for c in &mut self.clauses {
            c.sort();
            c.dedup();
        }
        self.clauses
            .retain(|c| !c.windows(2).any(|w| w[0].var() == w[1].var()));
        self.clauses.sort();
        self.clauses.dedup();
    }

    pub fn has_tautology(&self) -> bool {
        self.clauses.iter().any(|c| {
            c.iter()
                .any(|&l| c.iter().any(|&m| m == !l))
        })
    }
}
