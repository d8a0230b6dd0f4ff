use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::ground::{GroundSet, VarSet};
use crate::statement::{sta_size, statements, Statement};
use crate::{CiError, Result};

/// A set of CI statements over a ground set, stored as a bitset over the
/// canonical statement indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CIModel {
    ground: Arc<GroundSet>,
    bits: BitSet,
}

/// Injective map between ground sets: variable `i` of `source` goes to
/// variable `image[i]` of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMap {
    source: Arc<GroundSet>,
    target: Arc<GroundSet>,
    image: Vec<usize>,
}

impl VariableMap {
    pub fn new(source: Arc<GroundSet>, target: Arc<GroundSet>, image: Vec<usize>) -> Result<VariableMap> {
        if image.len() != source.len() {
            return Err(CiError::BadMap("defined on the whole source"));
        }
        let mut hit: VarSet = 0;
        for &t in &image {
            if t >= target.len() {
                return Err(CiError::VariableOutOfRange { index: t, n: target.len() });
            }
            if hit >> t & 1 == 1 {
                return Err(CiError::BadMap("injective"));
            }
            hit |= 1 << t;
        }
        Ok(VariableMap { source, target, image })
    }

    /// Sends each source label to the equal label of `target`.
    pub fn by_labels(source: Arc<GroundSet>, target: Arc<GroundSet>) -> Result<VariableMap> {
        let image = source
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| CiError::NotSuperset(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        VariableMap::new(source, target, image)
    }

    pub fn source(&self) -> &Arc<GroundSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroundSet> {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len()
    }

    pub fn apply_set(&self, set: VarSet) -> VarSet {
        (0..self.source.len())
            .filter(|&i| set >> i & 1 == 1)
            .fold(0, |m, i| m | 1 << self.image[i])
    }

    pub fn inverse(&self) -> Result<VariableMap> {
        if !self.is_bijective() {
            return Err(CiError::BadMap("bijective"));
        }
        let mut inv = vec![0; self.image.len()];
        for (i, &t) in self.image.iter().enumerate() {
            inv[t] = i;
        }
        VariableMap::new(self.target.clone(), self.source.clone(), inv)
    }
}

pub(crate) fn same_ground(a: &Arc<GroundSet>, b: &Arc<GroundSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl CIModel {
    pub fn empty(ground: Arc<GroundSet>) -> CIModel {
        let bits = BitSet::new(sta_size(ground.len()));
        CIModel { ground, bits }
    }

    /// `sta(N)`.
    pub fn full(ground: Arc<GroundSet>) -> CIModel {
        let bits = BitSet::full(sta_size(ground.len()));
        CIModel { ground, bits }
    }

    pub fn from_bits(ground: Arc<GroundSet>, bits: BitSet) -> Result<CIModel> {
        let size = sta_size(ground.len());
        if bits.len() != size {
            return Err(CiError::StatementOutOfRange { index: bits.len(), size });
        }
        Ok(CIModel { ground, bits })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ground: Arc<GroundSet>, it: I) -> Result<CIModel> {
        let mut m = CIModel::empty(ground);
        let size = m.bits.len();
        for i in it {
            if i >= size {
                return Err(CiError::StatementOutOfRange { index: i, size });
            }
            m.bits.insert(i);
        }
        Ok(m)
    }

    pub fn from_statements<I: IntoIterator<Item = Statement>>(ground: Arc<GroundSet>, it: I) -> Result<CIModel> {
        let mut m = CIModel::empty(ground);
        for s in it {
            m.insert(s)?;
        }
        Ok(m)
    }

    /// Builds a model from statement strings like `"a b | c"`.
    pub fn parse_statements<S: AsRef<str>>(ground: Arc<GroundSet>, items: &[S]) -> Result<CIModel> {
        let stmts = items
            .iter()
            .map(|t| ground.parse_statement(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        CIModel::from_statements(ground, stmts)
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn into_bits(self) -> BitSet {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.bits.len()
    }

    fn check_statement(&self, s: &Statement) -> Result<()> {
        if s.vars() & !self.ground.all() != 0 {
            return Err(CiError::VariableOutOfRange {
                index: (31 - s.vars().leading_zeros()) as usize,
                n: self.n(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, s: &Statement) -> bool {
        s.vars() & !self.ground.all() == 0 && self.bits.contains(s.index(self.n()))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, s: Statement) -> Result<()> {
        self.check_statement(&s)?;
        let n = self.n();
        self.bits.insert(s.index(n));
        Ok(())
    }

    pub fn remove(&mut self, s: &Statement) {
        if s.vars() & !self.ground.all() == 0 {
            let n = self.n();
            self.bits.remove(s.index(n));
        }
    }

    pub fn statements(&self) -> impl Iterator<Item = Statement> + '_ {
        let table = statements(self.n());
        self.bits.iter().map(move |i| table[i])
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    fn assert_same_ground(&self, other: &CIModel) {
        assert!(
            same_ground(&self.ground, &other.ground),
            "models over different ground sets: {:?} vs {:?}",
            self.ground,
            other.ground
        );
    }

    pub fn union(&self, other: &CIModel) -> CIModel {
        self.assert_same_ground(other);
        CIModel { ground: self.ground.clone(), bits: self.bits.union(&other.bits) }
    }

    pub fn intersection(&self, other: &CIModel) -> CIModel {
        self.assert_same_ground(other);
        CIModel { ground: self.ground.clone(), bits: self.bits.intersection(&other.bits) }
    }

    pub fn difference(&self, other: &CIModel) -> CIModel {
        self.assert_same_ground(other);
        CIModel { ground: self.ground.clone(), bits: self.bits.difference(&other.bits) }
    }

    pub fn is_subset(&self, other: &CIModel) -> bool {
        self.assert_same_ground(other);
        self.bits.is_subset(&other.bits)
    }

    /// Statementwise image under an injective map (the ascetic extension of
    /// the image when the map is not onto).
    pub fn embed(&self, f: &VariableMap) -> Result<CIModel> {
        if !same_ground(&self.ground, &f.source) {
            return Err(CiError::GroundMismatch);
        }
        let mut out = CIModel::empty(f.target.clone());
        let n = out.n();
        for s in self.statements() {
            out.bits.insert(s.mapped(&f.image).index(n));
        }
        Ok(out)
    }

    /// The `f`-copy of the model; `f` must be a bijection from its ground.
    pub fn copy_model(&self, f: &VariableMap) -> Result<CIModel> {
        if !f.is_bijective() {
            return Err(CiError::BadMap("bijective"));
        }
        self.embed(f)
    }

    /// Image under a permutation of the variables (`perm[i]` = new index).
    pub fn permuted(&self, perm: &[usize]) -> CIModel {
        let n = self.n();
        let mut out = CIModel::empty(self.ground.clone());
        for s in self.statements() {
            out.bits.insert(s.mapped(perm).index(n));
        }
        out
    }

    /// `M ∩ sta(S)` re-indexed over the ground set `S`.
    pub fn marginalize(&self, s: VarSet) -> Result<CIModel> {
        if s & !self.ground.all() != 0 {
            return Err(CiError::VariableOutOfRange {
                index: (31 - s.leading_zeros()) as usize,
                n: self.n(),
            });
        }
        let sub = Arc::new(self.ground.restrict(s));
        let mut map = vec![usize::MAX; self.n()];
        for (new, old) in (0..self.n()).filter(|&v| s >> v & 1 == 1).enumerate() {
            map[old] = new;
        }
        let mut out = CIModel::empty(sub);
        let m = out.n();
        for st in self.statements() {
            if st.vars() & !s == 0 {
                out.bits.insert(st.mapped(&map).index(m));
            }
        }
        Ok(out)
    }

    /// Marginal onto the variables named by `labels`.
    pub fn marginalize_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<CIModel> {
        self.marginalize(self.ground.set_of(labels)?)
    }

    /// `ij|K ↦ ij|N∖ijK`.
    pub fn dualize(&self) -> CIModel {
        let n = self.n();
        let all = self.ground.all();
        let mut out = CIModel::empty(self.ground.clone());
        for s in self.statements() {
            let d = Statement::raw(s.i as usize, s.j as usize, all & !s.vars());
            out.bits.insert(d.index(n));
        }
        out
    }

    /// Extends the model to `o ⊇ N` by making every new variable completely
    /// independent.
    pub fn lift(&self, o: &Arc<GroundSet>) -> Result<CIModel> {
        let f = VariableMap::by_labels(self.ground.clone(), o.clone())?;
        let image_set = f.apply_set(self.ground.all());
        let mut pre = vec![usize::MAX; o.len()];
        for (i, &t) in f.image.iter().enumerate() {
            pre[t] = i;
        }
        let n = self.n();
        let mut out = CIModel::empty(o.clone());
        for (idx, s) in statements(o.len()).iter().enumerate() {
            let keep = if s.pair() & !image_set != 0 {
                true
            } else {
                self.bits.contains(s.mapped_partial(&pre, image_set).index(n))
            };
            if keep {
                out.bits.insert(idx);
            }
        }
        Ok(out)
    }

    /// Tight replication of variable `u` by a new variable labelled `v`,
    /// appended at the end of the ground set.
    pub fn tight_replicate(&self, u: &str, v: &str) -> Result<CIModel> {
        let u = self.ground.var(u)?;
        if self.ground.index_of(v).is_some() {
            return Err(CiError::DuplicateLabel(v.to_string()));
        }
        let big = Arc::new(self.ground.extended([v])?);
        let n = self.n();
        let vi = n;
        let rho = |x: usize| if x == vi { u } else { x };
        let rho_set = |k: VarSet| if k >> vi & 1 == 1 { (k & !(1 << vi)) | 1 << u } else { k };
        let l_set = self.ground.all() & !(1 << u);
        let mut out = CIModel::empty(big.clone());
        for (idx, s) in statements(n + 1).iter().enumerate() {
            let (a, b) = (rho(s.i as usize), rho(s.j as usize));
            let c = rho_set(s.k);
            let keep = if a != b {
                if c & (1 << a | 1 << b) != 0 {
                    true
                } else {
                    self.bits.contains(Statement::raw(a, b, c).index(n))
                }
            } else {
                // u ⊥ u | C means u ⊥ L∖C | C
                let g = expand_global(&self.ground, 1 << u, l_set & !c, c)?;
                g.bits.is_subset(&self.bits)
            };
            if keep {
                out.bits.insert(idx);
            }
        }
        Ok(out)
    }

    /// `N^M`: every variable occurring in some statement.
    pub fn support_set(&self) -> VarSet {
        self.statements().fold(0, |m, s| m | s.vars())
    }

    /// Rewrites the model over another ground set with the same labels.
    pub fn relabel_to(&self, target: &Arc<GroundSet>) -> Result<CIModel> {
        if self.n() != target.len() {
            return Err(CiError::GroundMismatch);
        }
        self.copy_model(&VariableMap::by_labels(self.ground.clone(), target.clone())?)
    }

    /// Model text format: `ground:` header plus one statement per line in
    /// canonical order.
    pub fn to_text(&self) -> String {
        let mut s = format!("ground: {}\n", self.ground);
        for st in self.statements() {
            s.push_str(&st.display(&self.ground).to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the model text format.
    pub fn parse(text: &str) -> Result<CIModel> {
        let mut ground: Option<Arc<GroundSet>> = None;
        let mut model: Option<CIModel> = None;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match &ground {
                None => {
                    let rest = line
                        .strip_prefix("ground:")
                        .ok_or_else(|| CiError::parse(line_no, "expected `ground:` header"))?;
                    let g = GroundSet::new(rest.split_whitespace())
                        .map_err(|e| CiError::parse(line_no, e.to_string()))?;
                    let g = Arc::new(g);
                    model = Some(CIModel::empty(g.clone()));
                    ground = Some(g);
                }
                Some(g) => {
                    let s = g
                        .parse_statement(line)
                        .map_err(|e| CiError::parse(line_no, strip_line(e)))?;
                    let m = model.as_mut().unwrap();
                    if m.contains(&s) {
                        return Err(CiError::parse(line_no, format!("duplicate statement `{line}`")));
                    }
                    m.insert(s)?;
                }
            }
        }
        model.ok_or_else(|| CiError::parse(0, "missing `ground:` header"))
    }
}

fn strip_line(e: CiError) -> String {
    match e {
        CiError::Parse { message, .. } => message,
        other => other.to_string(),
    }
}

impl Statement {
    /// Maps pair and the part of `K` inside `domain` through `pre`.
    fn mapped_partial(&self, pre: &[usize], domain: VarSet) -> Statement {
        let mut k = 0;
        let mut rest = self.k & domain;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            k |= 1 << pre[v];
        }
        Statement::raw(pre[self.i as usize], pre[self.j as usize], k)
    }
}

/// `{ ij|L : i∈I, j∈J, K ⊆ L ⊆ IJK∖ij }`, the elementary statements of the
/// global statement `I ⊥ J | K`.
pub fn expand_global(ground: &Arc<GroundSet>, i_set: VarSet, j_set: VarSet, k_set: VarSet) -> Result<CIModel> {
    let all = ground.all();
    if (i_set | j_set | k_set) & !all != 0 {
        let bad = (i_set | j_set | k_set) & !all;
        return Err(CiError::VariableOutOfRange { index: bad.trailing_zeros() as usize, n: ground.len() });
    }
    if i_set & j_set != 0 || i_set & k_set != 0 || j_set & k_set != 0 {
        return Err(CiError::Overlap("global statement sides must be disjoint".into()));
    }
    let n = ground.len();
    let mut out = CIModel::empty(ground.clone());
    let ijk = i_set | j_set | k_set;
    for i in (0..n).filter(|&v| i_set >> v & 1 == 1) {
        for j in (0..n).filter(|&v| j_set >> v & 1 == 1) {
            let free = ijk & !k_set & !(1 << i | 1 << j);
            // all subsets of `free`, added to K
            let mut sub = free;
            loop {
                out.bits.insert(Statement::raw(i, j, k_set | sub).index(n));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }
    Ok(out)
}

/// `M ∪ M' ∪ [N∖N', N'∖N | N∩N']` over the union ground (labels of `m`
/// first, then the new labels of `m2` in their order).
pub fn least_adhesion(m: &CIModel, m2: &CIModel) -> Result<CIModel> {
    let g1 = m.ground();
    let g2 = m2.ground();
    let shared1: VarSet = (0..g1.len()).filter(|&i| g2.index_of(g1.name(i)).is_some()).fold(0, |s, i| s | 1 << i);
    let shared2: VarSet = (0..g2.len()).filter(|&i| g1.index_of(g2.name(i)).is_some()).fold(0, |s, i| s | 1 << i);
    let a = m.marginalize(shared1)?;
    let b = m2.marginalize(shared2)?.relabel_to(a.ground())?;
    if a != b {
        return Err(CiError::NotConsonant);
    }
    let extra: Vec<String> = g2.names().iter().filter(|n| g1.index_of(n).is_none()).cloned().collect();
    let union = Arc::new(g1.extended(extra)?);
    let e1 = m.embed(&VariableMap::by_labels(g1.clone(), union.clone())?)?;
    let f2 = VariableMap::by_labels(g2.clone(), union.clone())?;
    let e2 = m2.embed(&f2)?;
    let only1 = g1.all() & !shared1;
    let only2 = f2.apply_set(g2.all() & !shared2);
    let glob = expand_global(&union, only1, only2, shared1)?;
    Ok(e1.union(&e2).union(&glob))
}

impl fmt::Display for CIModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.statements().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let g = &self.ground;
            let pair = g.format_set(s.pair());
            let cond = if s.k == 0 { "∅".to_string() } else { g.format_set(s.k) };
            write!(f, "{pair}|{cond}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for CIModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CIModel[{}]{}", self.ground, self)
    }
}
