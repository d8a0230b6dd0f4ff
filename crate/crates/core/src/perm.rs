//! Permutations of the ground set and their action on statement indices.

use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::ground::MAX_GROUND;
use crate::statement::statements;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// `table[p][t]` is the index of the image of statement `t` under the p-th
/// permutation of `permutations(n)`.
pub fn statement_permutations(n: usize) -> &'static [Vec<u32>] {
    static TABLES: [OnceLock<Vec<Vec<u32>>>; 7] = [const { OnceLock::new() }; 7];
    assert!(n < 7 && n <= MAX_GROUND, "statement permutation tables are built for n ≤ 6");
    TABLES[n].get_or_init(|| {
        permutations(n)
            .iter()
            .map(|p| statements(n).iter().map(|s| s.mapped(p).index(n) as u32).collect())
            .collect()
    })
}

/// Applies a statement permutation table to a bitset.
pub fn permute_bits(bits: &BitSet, table: &[u32]) -> BitSet {
    BitSet::from_indices(bits.len(), bits.iter().map(|i| table[i] as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn tables_are_bijections() {
        for t in statement_permutations(4) {
            let mut s = t.clone();
            s.sort();
            assert_eq!(s, (0..24).collect::<Vec<u32>>());
        }
    }
}
