//! Canonical (Guigues–Duquenne) implicational bases of Moore families.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::closure::with_oracle;
use crate::frames::{FrameSpec, Implication};
use crate::ground::GroundSet;
use crate::model::CIModel;
use crate::perm::{permute_bits, statement_permutations};
use crate::statement::sta_size;
use crate::{CiError, Result};

/// Closure operator of a Moore family on subsets of `0..universe()`.
pub trait MooreOracle {
    fn universe(&self) -> usize;
    fn close(&self, y: &BitSet) -> Result<BitSet>;
    fn family_size(&self) -> Option<u64> {
        None
    }
}

/// Closure as the intersection of the members containing the argument.
pub struct FamilyOracle {
    universe: usize,
    members: Vec<BitSet>,
    index: HashSet<BitSet>,
}

impl FamilyOracle {
    /// The family must contain the full set.
    pub fn new(universe: usize, members: Vec<BitSet>) -> FamilyOracle {
        let index = members.iter().cloned().collect();
        FamilyOracle { universe, members, index }
    }
}

impl MooreOracle for FamilyOracle {
    fn universe(&self) -> usize {
        self.universe
    }

    fn close(&self, y: &BitSet) -> Result<BitSet> {
        if self.index.contains(y) {
            return Ok(y.clone());
        }
        let mut acc = BitSet::full(self.universe);
        for m in &self.members {
            if y.is_subset(m) {
                acc.intersect_with(m);
            }
        }
        Ok(acc)
    }

    fn family_size(&self) -> Option<u64> {
        Some(self.index.len() as u64)
    }
}

/// Frame closure over the standard ground of size `n`.
pub struct FrameOracle {
    pub frame: FrameSpec,
    pub n: usize,
}

impl MooreOracle for FrameOracle {
    fn universe(&self) -> usize {
        sta_size(self.n)
    }

    fn close(&self, y: &BitSet) -> Result<BitSet> {
        with_oracle(self.frame, self.n, |o| o.closure_bits(y))
    }
}

/// `premise → consequent` over an abstract universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisImplication {
    pub premise: BitSet,
    pub consequent: BitSet,
}

/// Least superset of `y` respecting every implication.
pub fn implication_closure(basis: &[BasisImplication], y: &BitSet) -> BitSet {
    saturate(basis, y.clone(), false)
}

/// Fixpoint of the implications; with `strict`, only premises that are
/// proper subsets fire.
fn saturate(basis: &[BasisImplication], mut y: BitSet, strict: bool) -> BitSet {
    loop {
        let mut changed = false;
        for imp in basis {
            if imp.consequent.is_subset(&y) || !imp.premise.is_subset(&y) {
                continue;
            }
            if strict && imp.premise.count() == y.count() {
                continue;
            }
            y.union_with(&imp.consequent);
            changed = true;
        }
        if !changed {
            return y;
        }
    }
}

fn checked_close(oracle: &dyn MooreOracle, y: &BitSet) -> Result<BitSet> {
    let c = oracle.close(y)?;
    if !y.is_subset(&c) || oracle.close(&c)? != c {
        return Err(CiError::Unsupported(format!(
            "closure oracle is not a closure operator at {y:?}"
        )));
    }
    Ok(c)
}

fn sort_basis(basis: &mut [BasisImplication]) {
    basis.sort_by(|a, b| (a.premise.count(), &a.premise).cmp(&(b.premise.count(), &b.premise)));
}

/// The canonical basis `{Q → cl(Q)∖Q : Q pseudo-closed}`, sorted by
/// `(|Q|, Q)`. Pseudo-closed sets are found among the sets closed under the
/// partial basis, visited in lectic order.
pub fn canonical_basis(oracle: &dyn MooreOracle) -> Result<Vec<BasisImplication>> {
    let u = oracle.universe();
    let mut basis = Vec::new();
    let mut a = BitSet::new(u);
    loop {
        let c = checked_close(oracle, &a)?;
        if c != a {
            basis.push(BasisImplication {
                premise: a.clone(),
                consequent: c.difference(&a),
            });
        }
        match next_closed(&a, &basis, u) {
            Some(next) => a = next,
            None => break,
        }
    }
    sort_basis(&mut basis);
    Ok(basis)
}

/// The lectically next set after `a` that is closed under the strict
/// saturation by `basis`.
fn next_closed(a: &BitSet, basis: &[BasisImplication], u: usize) -> Option<BitSet> {
    for i in (0..u).rev() {
        if a.contains(i) {
            continue;
        }
        let mut b = BitSet::from_indices(u, a.iter().filter(|&x| x < i));
        b.insert(i);
        let b = saturate(basis, b, true);
        if b.difference(a).iter().next() == Some(i) {
            return Some(b);
        }
    }
    None
}

/// Largest universe for the cardinality-wise procedure and model counting.
const LITERAL_MAX_UNIVERSE: usize = 20;

fn subsets_of_size(u: usize, m: usize, mut f: impl FnMut(BitSet) -> Result<()>) -> Result<()> {
    fn rec(start: usize, u: usize, left: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(BitSet) -> Result<()>) -> Result<()> {
        if left == 0 {
            return f(BitSet::from_indices(u, acc.iter().copied()));
        }
        for x in start..=u - left {
            acc.push(x);
            rec(x + 1, u, left - 1, acc, f)?;
            acc.pop();
        }
        Ok(())
    }
    rec(0, u, m, &mut Vec::new(), &mut f)
}

/// Number of subsets of the universe respecting every implication.
pub fn count_generated(basis: &[BasisImplication], u: usize) -> Result<u64> {
    if u > LITERAL_MAX_UNIVERSE {
        return Err(CiError::Unsupported(format!("model counting stops at {LITERAL_MAX_UNIVERSE} elements")));
    }
    let masks: Vec<(u64, u64)> = basis
        .iter()
        .map(|b| (b.premise.words().first().copied().unwrap_or(0), b.consequent.words().first().copied().unwrap_or(0)))
        .collect();
    Ok((0u64..1 << u)
        .filter(|s| masks.iter().all(|&(p, c)| s & p != p || s & c == c))
        .count() as u64)
}

/// The cardinality-by-cardinality procedure: raise `m`, add every
/// pseudo-closed set of size `m`, stop once the basis generates exactly as
/// many sets as the family has. Small universes only.
pub fn canonical_basis_literal(oracle: &dyn MooreOracle) -> Result<Vec<BasisImplication>> {
    let u = oracle.universe();
    if u > LITERAL_MAX_UNIVERSE {
        return Err(CiError::Unsupported(format!("the literal procedure stops at {LITERAL_MAX_UNIVERSE} elements")));
    }
    let family_size = match oracle.family_size() {
        Some(s) => s,
        None => {
            let mut k = 0;
            for s in 0u64..1 << u {
                let y = BitSet::from_words(u, vec![s]);
                if oracle.close(&y)? == y {
                    k += 1;
                }
            }
            k
        }
    };
    // largest m with every set of size ≤ m closed
    let mut m: isize = -1;
    'raise: for size in 0..=u {
        let mut all = true;
        subsets_of_size(u, size, |y| {
            if all && oracle.close(&y)? != y {
                all = false;
            }
            Ok(())
        })?;
        if !all {
            break 'raise;
        }
        m = size as isize;
    }
    let mut basis: Vec<BasisImplication> = Vec::new();
    loop {
        if m == u as isize {
            break;
        }
        m += 1;
        if m == u as isize {
            break;
        }
        let mut found = Vec::new();
        subsets_of_size(u, m as usize, |y| {
            let c = checked_close(oracle, &y)?;
            if c == y {
                return Ok(());
            }
            // pseudo-closed: contains the closure of every smaller pseudo-closed subset
            let ok = basis
                .iter()
                .all(|b| !b.premise.is_subset(&y) || b.consequent.is_subset(&y));
            if ok {
                found.push(BasisImplication { consequent: c.difference(&y), premise: y });
            }
            Ok(())
        })?;
        basis.extend(found);
        if count_generated(&basis, u)? == family_size {
            break;
        }
    }
    sort_basis(&mut basis);
    Ok(basis)
}

/// True when every premise is a minimal non-closed set, i.e. all its
/// maximal proper subsets are closed.
pub fn is_implicatively_perfect(oracle: &dyn MooreOracle, basis: &[BasisImplication]) -> Result<bool> {
    for b in basis {
        for x in b.premise.iter() {
            let mut y = b.premise.clone();
            y.remove(x);
            if oracle.close(&y)? != y {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical key of an implication under permutations of `n` variables.
fn implication_key(b: &BasisImplication, n: usize) -> (BitSet, BitSet) {
    statement_permutations(n)
        .iter()
        .map(|t| (permute_bits(&b.premise, t), permute_bits(&b.consequent, t)))
        .min()
        .expect("identity permutation")
}

/// Permutational types of a basis over statement universes: canonical
/// representative and the number of basis elements of that type, in order
/// of first appearance.
pub fn implication_types(basis: &[BasisImplication], n: usize) -> Vec<(BasisImplication, usize)> {
    let mut order = Vec::new();
    let mut counts: HashMap<(BitSet, BitSet), usize> = HashMap::new();
    for b in basis {
        let k = implication_key(b, n);
        let e = counts.entry(k.clone()).or_default();
        if *e == 0 {
            order.push(k);
        }
        *e += 1;
    }
    order
        .into_iter()
        .map(|k| {
            let c = counts[&k];
            (BasisImplication { premise: k.0, consequent: k.1 }, c)
        })
        .collect()
}

pub fn to_implications(basis: &[BasisImplication], ground: &Arc<GroundSet>) -> Result<Vec<Implication>> {
    basis
        .iter()
        .map(|b| {
            Ok(Implication::new(
                CIModel::from_bits(ground.clone(), b.premise.clone())?,
                CIModel::from_bits(ground.clone(), b.consequent.clone())?,
            ))
        })
        .collect()
}
