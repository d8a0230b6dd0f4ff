use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::perm::{permute_bits, statement_permutations};

/// A permutational type: its least member and the number of members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep: BitSet,
    pub size: usize,
}

/// The least image of `bits` under all permutations of the `n` variables.
pub fn canonical_form(bits: &BitSet, n: usize) -> BitSet {
    statement_permutations(n)
        .iter()
        .map(|t| permute_bits(bits, t))
        .min()
        .expect("at least the identity permutation")
}

/// All distinct images of `bits`, sorted.
pub fn orbit_of(bits: &BitSet, n: usize) -> Vec<BitSet> {
    statement_permutations(n)
        .iter()
        .map(|t| permute_bits(bits, t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Orbits of a permutation-closed collection, ordered by `(|rep|, rep)`.
/// Sizes count members of `models`, so they sum to `models.len()`.
pub fn orbit_classes(models: &[BitSet], n: usize) -> Vec<Orbit> {
    let reps: Vec<BitSet> = models.par_iter().map(|m| canonical_form(m, n)).collect();
    let mut sizes: HashMap<BitSet, usize> = HashMap::new();
    for r in reps {
        *sizes.entry(r).or_default() += 1;
    }
    let mut out: Vec<Orbit> = sizes.into_iter().map(|(rep, size)| Orbit { rep, size }).collect();
    out.sort_by(|a, b| (a.rep.count(), &a.rep).cmp(&(b.rep.count(), &b.rep)));
    out
}
