use crate::{Cnf, EngineKind, Lit, SatEngine, SatError};

pub const DEFAULT_MODEL_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EnumMethod {
    /// Solution-guided partition of the search space: each model found
    /// splits the remaining space into disjoint cubes by the first variable
    /// that differs from it.
    #[default]
    Partition,
    /// Classic AllSAT: block every full assignment found.
    Blocking,
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub cap: u64,
    pub method: EnumMethod,
    pub engine: EngineKind,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap: DEFAULT_MODEL_CAP,
            method: EnumMethod::Partition,
            engine: EngineKind::Embedded,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub models: Vec<Vec<bool>>,
    /// False when the cap stopped enumeration early.
    pub complete: bool,
}

/// Calls `f` on every satisfying assignment exactly once. Returns `Ok(false)`
/// when more than `cfg.cap` models exist; `f` has then seen the first `cap`.
pub fn for_each_model<F: FnMut(&[bool])>(
    cnf: &Cnf,
    cfg: &EnumConfig,
    mut f: F,
) -> Result<bool, SatError> {
    let mut engine = cfg.engine.build(cnf);
    match cfg.method {
        EnumMethod::Partition => partition(engine.as_mut(), cnf.num_vars(), cfg.cap, &mut f),
        EnumMethod::Blocking => blocking(engine.as_mut(), cnf.num_vars(), cfg.cap, &mut f),
    }
}

pub fn enumerate_models(cnf: &Cnf, cfg: &EnumConfig) -> Result<Enumeration, SatError> {
    let mut models = Vec::new();
    let complete = for_each_model(cnf, cfg, |m| models.push(m.to_vec()))?;
    models.sort();
    Ok(Enumeration { models, complete })
}

fn partition(
    engine: &mut dyn SatEngine,
    n: usize,
    cap: u64,
    f: &mut dyn FnMut(&[bool]),
) -> Result<bool, SatError> {
    let mut count = 0u64;
    let mut stack: Vec<(Vec<Lit>, usize)> = vec![(Vec::new(), 0)];
    while let Some((prefix, start)) = stack.pop() {
        if !engine.solve(&prefix)? {
            continue;
        }
        if count == cap {
            return Ok(false);
        }
        count += 1;
        let w = engine.model()[..n].to_vec();
        f(&w);
        // child i keeps w on start..i and flips variable i
        let mut fixed = prefix;
        let mut children = Vec::with_capacity(n - start);
        for (i, &value) in w.iter().enumerate().skip(start) {
            let mut child = fixed.clone();
            child.push(Lit::new(crate::Var(i as u32), value));
            children.push((child, i + 1));
            fixed.push(Lit::new(crate::Var(i as u32), !value));
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(true)
}

fn blocking(
    engine: &mut dyn SatEngine,
    n: usize,
    cap: u64,
    f: &mut dyn FnMut(&[bool]),
) -> Result<bool, SatError> {
    let mut count = 0u64;
    while engine.solve(&[])? {
        if count == cap {
            return Ok(false);
        }
        count += 1;
        let w = engine.model()[..n].to_vec();
        f(&w);
        if n == 0 {
            break;
        }
        let block: Vec<Lit> = w
            .iter()
            .enumerate()
            .map(|(v, &b)| Lit::new(crate::Var(v as u32), b))
            .collect();
        if !engine.add_clause(&block)? {
            break;
        }
    }
    Ok(true)
}
