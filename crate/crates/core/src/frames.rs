//! CNF encodings of frame membership and implication bases.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use ci_sat::{dimacs, Cnf, Lit};

use crate::bitset::BitSet;
use crate::ground::{GroundSet, VarSet};
use crate::model::CIModel;
use crate::perm::permutations;
use crate::statement::{sta_size, statements, Statement};
use crate::{CiError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    Semigraphoid,
    Graphoid,
    CompSemigraphoid,
    CompGraphoid,
    Structural,
}

impl FrameKind {
    pub const ALL: [FrameKind; 5] = [
        FrameKind::Semigraphoid,
        FrameKind::Graphoid,
        FrameKind::CompSemigraphoid,
        FrameKind::CompGraphoid,
        FrameKind::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Semigraphoid => "semigraphoid",
            FrameKind::Graphoid => "graphoid",
            FrameKind::CompSemigraphoid => "comp-semigraphoid",
            FrameKind::CompGraphoid => "comp-graphoid",
            FrameKind::Structural => "structural",
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameKind {
    type Err = CiError;
    fn from_str(s: &str) -> Result<Self> {
        FrameKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CiError::Unsupported(format!("unknown frame `{s}`")))
    }
}

/// How structural closures are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructuralBackend {
    /// Clauses from the known 4-variable axiomatization.
    AxiomsN4,
    /// Exact feasibility over the supermodular cone.
    LpCone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameSpec {
    pub kind: FrameKind,
    pub closed_under_lifting: bool,
    pub closed_under_tight_replication: bool,
    pub structural_backend: StructuralBackend,
}

impl FrameSpec {
    /// Default flags: both true for semigraphoid and structural, false for
    /// the graphoid variants.
    pub fn new(kind: FrameKind) -> FrameSpec {
        let closed = matches!(kind, FrameKind::Semigraphoid | FrameKind::Structural);
        FrameSpec {
            kind,
            closed_under_lifting: closed,
            closed_under_tight_replication: closed,
            structural_backend: StructuralBackend::AxiomsN4,
        }
    }

    pub fn semigraphoid() -> FrameSpec {
        FrameSpec::new(FrameKind::Semigraphoid)
    }

    pub fn structural() -> FrameSpec {
        FrameSpec::new(FrameKind::Structural)
    }

    pub fn with_backend(mut self, b: StructuralBackend) -> FrameSpec {
        self.structural_backend = b;
        self
    }

    /// The structural frame with the backend that works at size `n`: the
    /// axioms at `n = 4`, the cone otherwise. Other frames are unchanged.
    pub fn for_size(self, n: usize) -> FrameSpec {
        if self.kind == FrameKind::Structural && n != 4 {
            self.with_backend(StructuralBackend::LpCone)
        } else {
            self
        }
    }

    pub fn uses_lp(&self) -> bool {
        self.kind == FrameKind::Structural && self.structural_backend == StructuralBackend::LpCone
    }

    /// Clause set for ground size `n`; fails for the LP backend and for the
    /// structural axioms away from `n = 4`.
    pub fn clause_set(&self, ground: &Arc<GroundSet>) -> Result<ClauseSet> {
        match self.kind {
            FrameKind::Semigraphoid => Ok(semigraphoid_clauses(ground)),
            FrameKind::Graphoid | FrameKind::CompSemigraphoid | FrameKind::CompGraphoid => {
                graphoid_family_clauses(ground, self.kind)
            }
            FrameKind::Structural => match self.structural_backend {
                StructuralBackend::AxiomsN4 => structural_clauses_n4(ground),
                StructuralBackend::LpCone => Err(CiError::Unsupported(
                    "the lp-cone backend has no clause set".into(),
                )),
            },
        }
    }

    /// Shared clause set over the standard ground of size `n`.
    pub fn cached_clauses(&self, n: usize) -> Result<Arc<ClauseSet>> {
        type Cache = Mutex<HashMap<(FrameKind, StructuralBackend, usize), Arc<ClauseSet>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let key = (self.kind, self.structural_backend, n);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let cs = Arc::new(self.clause_set(&Arc::new(GroundSet::standard(n)))?);
        cache.lock().unwrap().insert(key, cs.clone());
        Ok(cs)
    }
}

impl fmt::Display for FrameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// Horn clauses over statement variables (variable `t` = statement index `t`).
#[derive(Clone, Debug)]
pub struct ClauseSet {
    ground: Arc<GroundSet>,
    cnf: Cnf,
}

impl ClauseSet {
    pub fn new(ground: Arc<GroundSet>) -> ClauseSet {
        let cnf = Cnf::new(sta_size(ground.len()));
        ClauseSet { ground, cnf }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn len(&self) -> usize {
        self.cnf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cnf.is_empty()
    }

    /// Adds `antecedents → consequent`; a consequent among the antecedents
    /// gives a tautology and is skipped.
    pub fn push_rule(&mut self, antecedents: &[usize], consequent: usize) {
        if antecedents.contains(&consequent) {
            return;
        }
        let mut c: Vec<Lit> = antecedents.iter().map(|&a| Lit::negative(a)).collect();
        c.push(Lit::positive(consequent));
        self.cnf.add_clause(c).expect("statement indices are in range");
    }

    fn normalize(&mut self) {
        self.cnf.normalize();
    }

    /// Signed statement indices per clause (negative = negated), 1-based.
    pub fn signed_clauses(&self) -> Vec<Vec<i64>> {
        self.cnf
            .clauses()
            .iter()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    /// Evaluates the clauses on a model's characteristic assignment.
    pub fn satisfied_by(&self, bits: &BitSet) -> bool {
        self.cnf
            .clauses()
            .iter()
            .all(|c| c.iter().any(|l| bits.contains(l.var().index()) != l.is_negative()))
    }

    /// DIMACS text with a `c var <k> = <i> <j> | <K>` line per variable.
    pub fn to_dimacs(&self) -> String {
        let g = &self.ground;
        let comments: Vec<String> = statements(g.len())
            .iter()
            .enumerate()
            .map(|(k, s)| format!("var {} = {}", k + 1, s.display(g)))
            .collect();
        dimacs::to_dimacs_string(&self.cnf, &comments)
    }
}

fn idx(n: usize, i: usize, j: usize, k: VarSet) -> usize {
    Statement::raw(i, j, k).index(n)
}

/// Instances `(i, {j,l}, K)` with `K ⊆ N∖{i,j,l}`, `j < l`.
fn for_each_triple_instance(n: usize, mut f: impl FnMut(usize, usize, usize, VarSet)) {
    let all: VarSet = ((1u64 << n) - 1) as VarSet;
    for i in 0..n {
        for j in 0..n {
            for l in j + 1..n {
                if i == j || i == l {
                    continue;
                }
                let rest = all & !(1 << i | 1 << j | 1 << l);
                let mut k = rest;
                loop {
                    f(i, j, l, rest & !k);
                    if k == 0 {
                        break;
                    }
                    k = (k - 1) & rest;
                }
            }
        }
    }
}

fn push_semigraphoid(cs: &mut ClauseSet, n: usize) {
    for_each_triple_instance(n, |i, j, l, k| {
        let a = idx(n, i, j, k);
        let b = idx(n, i, l, k | 1 << j);
        let c = idx(n, i, l, k);
        let d = idx(n, i, j, k | 1 << l);
        cs.push_rule(&[a, b], c);
        cs.push_rule(&[a, b], d);
        cs.push_rule(&[c, d], a);
        cs.push_rule(&[c, d], b);
    });
}

/// Clauses for `ij|K, il|jK ⇔ il|K, ij|lK`: four per instance.
pub fn semigraphoid_clauses(ground: &Arc<GroundSet>) -> ClauseSet {
    let mut cs = ClauseSet::new(ground.clone());
    push_semigraphoid(&mut cs, ground.len());
    cs
}

/// Semigraphoid clauses plus intersection (graphoid), composition
/// (comp-semigraphoid) or both (comp-graphoid).
pub fn graphoid_family_clauses(ground: &Arc<GroundSet>, kind: FrameKind) -> Result<ClauseSet> {
    let (inter, comp) = match kind {
        FrameKind::Graphoid => (true, false),
        FrameKind::CompSemigraphoid => (false, true),
        FrameKind::CompGraphoid => (true, true),
        other => return Err(CiError::Unsupported(format!("{other} is not a graphoid variant"))),
    };
    let n = ground.len();
    let mut cs = semigraphoid_clauses(ground);
    for_each_triple_instance(n, |i, j, l, k| {
        let ij_lk = idx(n, i, j, k | 1 << l);
        let il_jk = idx(n, i, l, k | 1 << j);
        let ij_k = idx(n, i, j, k);
        let il_k = idx(n, i, l, k);
        if inter {
            cs.push_rule(&[ij_lk, il_jk], ij_k);
            cs.push_rule(&[ij_lk, il_jk], il_k);
        }
        if comp {
            cs.push_rule(&[ij_k, il_k], ij_lk);
            cs.push_rule(&[ij_k, il_k], il_jk);
        }
    });
    Ok(cs)
}

/// Implication schemes over four placeholder variables `i j k l`, written
/// as `ij|k ik|l => ij|l`; `-` marks an empty conditioning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTemplate {
    pub antecedents: Vec<(usize, usize, VarSet)>,
    pub consequents: Vec<(usize, usize, VarSet)>,
}

const PLACEHOLDERS: [char; 4] = ['i', 'j', 'k', 'l'];

fn parse_placeholder_statement(tok: &str) -> Result<(usize, usize, VarSet)> {
    let bad = || CiError::parse(0, format!("bad rule statement `{tok}`"));
    let (pair, cond) = tok.split_once('|').ok_or_else(bad)?;
    let pos = |c: char| PLACEHOLDERS.iter().position(|&p| p == c).ok_or_else(bad);
    let pc: Vec<char> = pair.chars().collect();
    if pc.len() != 2 {
        return Err(bad());
    }
    let (i, j) = (pos(pc[0])?, pos(pc[1])?);
    let mut k = 0;
    if cond != "-" {
        for c in cond.chars() {
            k |= 1 << pos(c)?;
        }
    }
    if i == j || k & (1 << i | 1 << j) != 0 {
        return Err(bad());
    }
    Ok((i, j, k))
}

impl RuleTemplate {
    pub fn parse(text: &str) -> Result<RuleTemplate> {
        let (a, c) = text
            .split_once("=>")
            .ok_or_else(|| CiError::parse(0, format!("missing `=>` in `{text}`")))?;
        let side = |s: &str| s.split_whitespace().map(parse_placeholder_statement).collect::<Result<Vec<_>>>();
        Ok(RuleTemplate { antecedents: side(a)?, consequents: side(c)? })
    }

    /// The implication obtained by sending placeholder `x` to `vars[x]`.
    pub fn instantiate(&self, ground: &Arc<GroundSet>, vars: &[usize]) -> Implication {
        let map = |list: &[(usize, usize, VarSet)]| {
            let stmts = list.iter().map(|&(i, j, k)| {
                let kk = (0..4).filter(|&x| k >> x & 1 == 1).fold(0, |m, x| m | 1 << vars[x]);
                Statement::raw(vars[i], vars[j], kk)
            });
            CIModel::from_statements(ground.clone(), stmts).expect("placeholders map into the ground")
        };
        Implication::new(map(&self.antecedents), map(&self.consequents))
    }

    /// Every instance over a 4-element ground set, deduplicated.
    pub fn instances(&self, ground: &Arc<GroundSet>) -> Vec<Implication> {
        assert_eq!(ground.len(), 4, "rule templates have four placeholders");
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in permutations(4) {
            let imp = self.instantiate(ground, &p);
            if seen.insert(imp.key()) {
                out.push(imp);
            }
        }
        out
    }
}

/// The two semigraphoid implication types over four variables.
pub const SEMIGRAPHOID_RULES_N4: [&str; 2] = [
    "ij|- il|j => il|- ij|l",
    "ij|k il|jk => il|k ij|kl",
];

/// Structural rules over four variables beyond the semigraphoid ones.
pub const STRUCTURAL_RULES_N4: [&str; 5] = [
    "ij|k ik|l il|j => ij|l ik|j il|k",
    "ij|k il|j jk|l kl|i => ij|l il|k jk|i kl|j",
    "ij|kl ik|- jl|- kl|ij => ij|- ik|jl jl|ik kl|-",
    "ij|- ij|kl kl|i kl|j => ij|k ij|l kl|- kl|ij",
    "ij|k jk|il il|j kl|- => ij|kl jk|i il|- kl|j",
];

/// Clause set of structural semigraphoids over exactly four variables.
pub fn structural_clauses_n4(ground: &Arc<GroundSet>) -> Result<ClauseSet> {
    if ground.len() != 4 {
        return Err(CiError::Unsupported(format!(
            "structural axioms are only known for 4 variables (got {}); use the lp-cone backend",
            ground.len()
        )));
    }
    let mut basis = Vec::new();
    for t in SEMIGRAPHOID_RULES_N4.iter().chain(STRUCTURAL_RULES_N4.iter()) {
        basis.extend(RuleTemplate::parse(t)?.instances(ground));
    }
    Ok(clauses_from_implications(ground, &basis, false))
}

/// `antecedents → consequents`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Implication {
    pub antecedents: CIModel,
    pub consequents: CIModel,
}

impl Implication {
    pub fn new(antecedents: CIModel, consequents: CIModel) -> Implication {
        assert!(crate::model::same_ground(antecedents.ground(), consequents.ground()));
        Implication { antecedents, consequents }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        self.antecedents.ground()
    }

    fn key(&self) -> (BitSet, BitSet) {
        (self.antecedents.bits().clone(), self.consequents.bits().clone())
    }

    pub fn permuted(&self, perm: &[usize]) -> Implication {
        Implication::new(self.antecedents.permuted(perm), self.consequents.permuted(perm))
    }

    /// True when the model satisfies the implication.
    pub fn holds_in(&self, m: &CIModel) -> bool {
        !self.antecedents.is_subset(m) || self.consequents.is_subset(m)
    }

    /// `a b | ; a c | b => a c |` form.
    pub fn to_text(&self) -> String {
        let side = |m: &CIModel| {
            m.statements()
                .map(|s| s.display(m.ground()).to_string())
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        let a = side(&self.antecedents);
        let c = side(&self.consequents);
        match (a.is_empty(), c.is_empty()) {
            (true, _) => format!("=> {c}"),
            (false, true) => format!("{a} =>"),
            _ => format!("{a} => {c}"),
        }
    }

    pub fn parse(ground: &Arc<GroundSet>, line: &str) -> Result<Implication> {
        let (a, c) = line
            .split_once("=>")
            .ok_or_else(|| CiError::parse(0, "missing `=>`"))?;
        let side = |s: &str| -> Result<CIModel> {
            let mut m = CIModel::empty(ground.clone());
            for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                m.insert(ground.parse_statement(part)?)?;
            }
            Ok(m)
        };
        Ok(Implication::new(side(a)?, side(c)?))
    }
}

impl fmt::Debug for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.antecedents, self.consequents)
    }
}

/// Parses an implication file: `ground:` header, then one implication per
/// line.
pub fn parse_implications(text: &str) -> Result<(Arc<GroundSet>, Vec<Implication>)> {
    let mut ground: Option<Arc<GroundSet>> = None;
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &ground {
            None => {
                let rest = line
                    .strip_prefix("ground:")
                    .ok_or_else(|| CiError::parse(no + 1, "expected `ground:` header"))?;
                ground = Some(Arc::new(
                    GroundSet::new(rest.split_whitespace()).map_err(|e| CiError::parse(no + 1, e.to_string()))?,
                ));
            }
            Some(g) => out.push(Implication::parse(g, line).map_err(|e| match e {
                CiError::Parse { message, .. } => CiError::parse(no + 1, message),
                other => CiError::parse(no + 1, other.to_string()),
            })?),
        }
    }
    let g = ground.ok_or_else(|| CiError::parse(0, "missing `ground:` header"))?;
    Ok((g, out))
}

/// Writes implications with a `ground:` header.
pub fn implications_to_text(ground: &GroundSet, basis: &[Implication]) -> String {
    let mut s = format!("ground: {ground}\n");
    for imp in basis {
        s.push_str(&imp.to_text());
        s.push('\n');
    }
    s
}

/// One clause per (instance, consequent). With `with_symmetry` every
/// implication is first expanded to all its images under permutations of
/// the ground set.
pub fn clauses_from_implications(ground: &Arc<GroundSet>, basis: &[Implication], with_symmetry: bool) -> ClauseSet {
    let mut cs = ClauseSet::new(ground.clone());
    let perms = if with_symmetry { permutations(ground.len()) } else { vec![(0..ground.len()).collect()] };
    let mut seen = HashSet::new();
    for imp in basis {
        for p in &perms {
            let inst = imp.permuted(p);
            if !seen.insert(inst.key()) {
                continue;
            }
            let ante: Vec<usize> = inst.antecedents.indices().collect();
            for c in inst.consequents.indices() {
                cs.push_rule(&ante, c);
            }
        }
    }
    cs.normalize();
    cs
}
