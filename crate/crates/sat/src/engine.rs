use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::{dimacs, Cnf, Lit, SatError, Solver};

/// Environment variable naming an external DIMACS solver executable.
pub const SOLVER_ENV: &str = "CI_SAT_SOLVER";

/// Common interface of the embedded solver and the external bridge.
pub trait SatEngine: Send {
    fn add_clause(&mut self, lits: &[Lit]) -> Result<bool, SatError>;
    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, SatError>;
    fn model(&self) -> &[bool];
    fn num_vars(&self) -> usize;
}

impl SatEngine for Solver {
    fn add_clause(&mut self, lits: &[Lit]) -> Result<bool, SatError> {
        Solver::add_clause(self, lits)
    }
    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, SatError> {
        Solver::solve(self, assumptions)
    }
    fn model(&self) -> &[bool] {
        Solver::model(self)
    }
    fn num_vars(&self) -> usize {
        Solver::num_vars(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum EngineKind {
    #[default]
    Embedded,
    External(PathBuf),
}

impl EngineKind {
    /// External when `CI_SAT_SOLVER` is set and nonempty, embedded otherwise.
    pub fn from_env() -> EngineKind {
        match std::env::var_os(SOLVER_ENV) {
            Some(p) if !p.is_empty() => EngineKind::External(PathBuf::from(p)),
            _ => EngineKind::Embedded,
        }
    }

    pub fn build(&self, cnf: &Cnf) -> Box<dyn SatEngine> {
        match self {
            EngineKind::Embedded => Box::new(Solver::from_cnf(cnf)),
            EngineKind::External(exe) => Box::new(ExternalSolver::new(exe.clone(), cnf.clone())),
        }
    }
}

/// Runs an external solver once per query. Assumptions are appended as unit
/// clauses to a temporary DIMACS file passed as the sole argument.
pub struct ExternalSolver {
    exe: PathBuf,
    cnf: Cnf,
    model: Vec<bool>,
}

static FILE_COUNTER: AtomicU64 = AtomicU64::new(0);

impl ExternalSolver {
    pub fn new(exe: PathBuf, cnf: Cnf) -> ExternalSolver {
        ExternalSolver {
            exe,
            cnf,
            model: Vec::new(),
        }
    }
}

/// Parses standard solver output. Returns `None` for UNSAT.
pub fn parse_solver_output(out: &str, num_vars: usize) -> Result<Option<Vec<bool>>, SatError> {
    let mut status = None;
    let mut model = vec![false; num_vars];
    for line in out.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                other => return Err(SatError::External(format!("unknown status `{other}`"))),
            };
        } else if let Some(rest) = t.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let x: i64 = tok
                    .parse()
                    .map_err(|_| SatError::External(format!("bad value token `{tok}`")))?;
                if let Some(l) = Lit::from_dimacs(x) {
                    if l.var().index() < num_vars {
                        model[l.var().index()] = !l.is_negative();
                    }
                }
            }
        }
    }
    match status {
        Some(true) => Ok(Some(model)),
        Some(false) => Ok(None),
        None => Err(SatError::External("no status line".into())),
    }
}

impl SatEngine for ExternalSolver {
    fn add_clause(&mut self, lits: &[Lit]) -> Result<bool, SatError> {
        self.cnf.add_clause(lits.to_vec())?;
        Ok(true)
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, SatError> {
        let mut query = self.cnf.clone();
        for &a in assumptions {
            query.add_clause(vec![a])?;
        }
        let path = std::env::temp_dir().join(format!(
            "ci-sat-{}-{}.cnf",
            std::process::id(),
            FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::write(&path, dimacs::to_dimacs_string(&query, &[]))?;
        let output = Command::new(&self.exe).arg(&path).output();
        let _ = std::fs::remove_file(&path);
        let output = output.map_err(|e| {
            SatError::External(format!("cannot run {}: {e}", self.exe.display()))
        })?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        match parse_solver_output(&stdout, query.num_vars())? {
            Some(model) => {
                if !query.eval(&model) {
                    return Err(SatError::External("reported model violates the formula".into()));
                }
                self.model = model;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn model(&self) -> &[bool] {
        &self.model
    }

    fn num_vars(&self) -> usize {
        self.cnf.num_vars()
    }
}
