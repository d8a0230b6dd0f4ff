//! Frame closures by SAT (clause-defined frames) or by exact cone
//! feasibility (structural frame without a clause set).

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use ci_lp::Rational;
use ci_sat::{EngineKind, Lit, SatEngine};

use crate::bitset::BitSet;
use crate::frames::{ClauseSet, FrameSpec};
use crate::model::{same_ground, CIModel};
use crate::statement::{sta_size, statements, Statement};
use crate::supermodular::{positive_deltas, supermodular_witness, LP_MAX_GROUND};
use crate::{CiError, Result};

enum Backend {
    Sat {
        clauses: Arc<ClauseSet>,
        engine: Box<dyn SatEngine>,
    },
    Lp {
        /// Semigraphoid clauses; their closure is a lower bound.
        prefilter: Box<ClosureOracle>,
    },
}

/// Closure operator of a frame's family over ground sets of one size.
/// Works on statement bitsets; labels are carried by the models passed in.
pub struct ClosureOracle {
    frame: FrameSpec,
    n: usize,
    backend: Backend,
}

impl ClosureOracle {
    pub fn new(frame: FrameSpec, n: usize) -> Result<ClosureOracle> {
        ClosureOracle::with_engine(frame, n, &EngineKind::from_env())
    }

    pub fn with_engine(frame: FrameSpec, n: usize, engine: &EngineKind) -> Result<ClosureOracle> {
        let backend = if frame.uses_lp() {
            if n > LP_MAX_GROUND {
                return Err(CiError::Unsupported(format!(
                    "structural closure over {n} variables exceeds the cone guard of {LP_MAX_GROUND}"
                )));
            }
            let pre = ClosureOracle::with_engine(FrameSpec::semigraphoid(), n, engine)?;
            Backend::Lp { prefilter: Box::new(pre) }
        } else {
            let clauses = frame.cached_clauses(n)?;
            let engine = engine.build(clauses.cnf());
            Backend::Sat { clauses, engine }
        };
        Ok(ClosureOracle { frame, n, backend })
    }

    pub fn frame(&self) -> FrameSpec {
        self.frame
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The clause set, for clause-defined frames.
    pub fn clauses(&self) -> Option<&Arc<ClauseSet>> {
        match &self.backend {
            Backend::Sat { clauses, .. } => Some(clauses),
            Backend::Lp { .. } => None,
        }
    }

    fn check(&self, m: &CIModel) -> Result<()> {
        if m.n() != self.n {
            return Err(CiError::GroundMismatch);
        }
        Ok(())
    }

    pub fn closure(&mut self, m: &CIModel) -> Result<CIModel> {
        self.check(m)?;
        let bits = self.closure_bits(m.bits())?;
        CIModel::from_bits(m.ground().clone(), bits)
    }

    pub fn closure_bits(&mut self, m: &BitSet) -> Result<BitSet> {
        let cand = m.complement();
        let forced = self.forced(m, &cand)?;
        Ok(m.union(&forced))
    }

    /// The statements of `cand` that lie in the closure of `m`.
    pub fn forced(&mut self, m: &BitSet, cand: &BitSet) -> Result<BitSet> {
        debug_assert_eq!(m.len(), sta_size(self.n));
        let cand = cand.difference(m);
        if cand.count() == 0 {
            return Ok(cand);
        }
        match &mut self.backend {
            Backend::Sat { engine, .. } => sat_forced(engine.as_mut(), m, &cand),
            Backend::Lp { prefilter } => {
                let lower = prefilter.closure_bits(m)?;
                let mut out = cand.intersection(&lower);
                let rest = cand.difference(&lower);
                out.union_with(&lp_forced(self.n, &lower, &rest)?);
                Ok(out)
            }
        }
    }

    /// Does the closure of `m` meet `cand ∖ m`?
    pub fn forces_any(&mut self, m: &BitSet, cand: &BitSet) -> Result<bool> {
        let cand = cand.difference(m);
        if cand.count() == 0 {
            return Ok(false);
        }
        match &mut self.backend {
            Backend::Sat { engine, .. } => {
                // Horn clauses: the least model avoids all of cand iff one model does.
                let mut a = positive(m);
                a.extend(cand.iter().map(Lit::negative));
                Ok(!engine.solve(&a)?)
            }
            Backend::Lp { prefilter } => {
                if prefilter.forces_any(m, &cand)? {
                    return Ok(true);
                }
                let lower = prefilter.closure_bits(m)?;
                Ok(supermodular_witness(self.n, &lower, &cand, &Rational::one())?.is_none())
            }
        }
    }

    pub fn is_member(&mut self, m: &CIModel) -> Result<bool> {
        self.check(m)?;
        if let Backend::Sat { clauses, .. } = &self.backend {
            return Ok(clauses.satisfied_by(m.bits()));
        }
        let cand = m.bits().complement();
        Ok(!self.forces_any(m.bits(), &cand)?)
    }

    /// `ante → cons` holds in the family iff `cons ⊆ cl(ante)`.
    pub fn check_implication(&mut self, ante: &CIModel, cons: &CIModel) -> Result<bool> {
        self.check(ante)?;
        if !same_ground(ante.ground(), cons.ground()) {
            return Err(CiError::GroundMismatch);
        }
        let missing = cons.bits().difference(ante.bits());
        Ok(self.forced(ante.bits(), &missing)?.count() == missing.count())
    }

    /// Closure plus a verdict for every statement outside `m`, in index order.
    pub fn closure_transcript(&mut self, m: &CIModel) -> Result<(CIModel, Vec<(Statement, bool)>)> {
        let cl = self.closure(m)?;
        let lines = statements(self.n)
            .iter()
            .enumerate()
            .filter(|(t, _)| !m.contains_index(*t))
            .map(|(t, s)| (*s, cl.contains_index(t)))
            .collect();
        Ok((cl, lines))
    }
}

fn positive(m: &BitSet) -> Vec<Lit> {
    m.iter().map(Lit::positive).collect()
}

fn sat_forced(engine: &mut dyn SatEngine, m: &BitSet, cand: &BitSet) -> Result<BitSet> {
    let mut assume = positive(m);
    let mut all_neg = assume.clone();
    all_neg.extend(cand.iter().map(Lit::negative));
    if engine.solve(&all_neg)? {
        return Ok(BitSet::new(cand.len()));
    }
    let mut open = cand.clone();
    if engine.solve(&assume)? {
        prune(&mut open, engine.model());
    }
    let mut forced = BitSet::new(cand.len());
    for t in cand.iter() {
        if !open.contains(t) {
            continue;
        }
        assume.push(Lit::negative(t));
        let sat = engine.solve(&assume)?;
        assume.pop();
        if sat {
            open.remove(t);
            prune(&mut open, engine.model());
        } else {
            forced.insert(t);
            assume.push(Lit::positive(t));
        }
    }
    Ok(forced)
}

/// Drops candidates false in a satisfying assignment.
fn prune(open: &mut BitSet, model: &[bool]) {
    let drop: Vec<usize> = open.iter().filter(|&t| !model[t]).collect();
    for t in drop {
        open.remove(t);
    }
}

fn lp_forced(n: usize, zero: &BitSet, cand: &BitSet) -> Result<BitSet> {
    let one = Rational::one();
    let mut forced = BitSet::new(cand.len());
    if cand.count() == 0 || supermodular_witness(n, zero, cand, &one)?.is_some() {
        return Ok(forced);
    }
    let mut open = cand.clone();
    for t in cand.iter() {
        if !open.contains(t) {
            continue;
        }
        let target = BitSet::from_indices(cand.len(), [t]);
        match supermodular_witness(n, zero, &target, &one)? {
            Some(w) => {
                let pos = positive_deltas(n, &w);
                open.difference_with(&pos);
            }
            None => forced.insert(t),
        }
    }
    Ok(forced)
}

thread_local! {
    static ORACLES: RefCell<HashMap<(FrameSpec, usize), ClosureOracle>> = RefCell::new(HashMap::new());
}

/// Runs `f` with this thread's cached oracle for `(frame, n)`.
pub fn with_oracle<R>(frame: FrameSpec, n: usize, f: impl FnOnce(&mut ClosureOracle) -> Result<R>) -> Result<R> {
    let frame = frame.for_size(n);
    let taken = ORACLES.with(|c| c.borrow_mut().remove(&(frame, n)));
    let mut oracle = match taken {
        Some(o) => o,
        None => ClosureOracle::new(frame, n)?,
    };
    let r = f(&mut oracle);
    ORACLES.with(|c| c.borrow_mut().insert((frame, n), oracle));
    r
}

/// `cl_F(M)` over the model's own ground set.
pub fn frame_closure(frame: FrameSpec, m: &CIModel) -> Result<CIModel> {
    with_oracle(frame, m.n(), |o| o.closure(m))
}

pub fn is_member(frame: FrameSpec, m: &CIModel) -> Result<bool> {
    with_oracle(frame, m.n(), |o| o.is_member(m))
}

pub fn check_implication(frame: FrameSpec, ante: &CIModel, cons: &CIModel) -> Result<bool> {
    with_oracle(frame, ante.n(), |o| o.check_implication(ante, cons))
}
