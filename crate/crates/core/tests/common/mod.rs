#![allow(dead_code)]

use std::sync::Arc;

pub mod worked;

use ci_core::{BitSet, CIModel, GroundSet, Statement};

pub fn ground(labels: &str) -> Arc<GroundSet> {
    Arc::new(GroundSet::new(labels.split_whitespace()).unwrap())
}

pub fn std_ground(n: usize) -> Arc<GroundSet> {
    Arc::new(GroundSet::standard(n))
}

/// `"ab|c, cd|-"` for one-letter labels, or `"a b | c; a' b | c"` when
/// labels are longer.
pub fn model(g: &Arc<GroundSet>, text: &str) -> CIModel {
    let mut m = CIModel::empty(g.clone());
    if text.trim().is_empty() {
        return m;
    }
    if text.contains(';') || text.contains(' ') && !text.contains(',') {
        for part in text.split(';') {
            m.insert(g.parse_statement(part.trim()).unwrap()).unwrap();
        }
        return m;
    }
    for part in text.split(',') {
        let part = part.trim();
        let (pair, cond) = part.split_once('|').unwrap();
        let pair: Vec<String> = pair.chars().map(String::from).collect();
        let cond: Vec<String> = if cond == "-" { vec![] } else { cond.chars().map(String::from).collect() };
        m.insert(g.statement(&pair[0], &pair[1], &cond).unwrap()).unwrap();
    }
    m
}

/// Statement `ij|K` built without the crate's parser.
pub fn st(n: usize, i: usize, j: usize, k: u32) -> usize {
    Statement::new(i, j, k).unwrap().index(n)
}

fn subsets(mask: u32) -> Vec<u32> {
    let mut out = vec![];
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            return out;
        }
        s = (s - 1) & mask;
    }
}

/// Horn rules of a frame written from the defining properties. Each entry
/// is `(antecedents, consequent)`.
pub fn axiom_rules(n: usize, semigraphoid: bool, intersection: bool, composition: bool) -> Vec<(Vec<usize>, usize)> {
    let mut rules = vec![];
    let all = (1u32 << n) - 1;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || i == k || j > k || j == k {
                    continue;
                }
                let rest = all & !(1 << i | 1 << j | 1 << k);
                for l in subsets(rest) {
                    let ij_kl = st(n, i, j, l | 1 << k);
                    let ik_l = st(n, i, k, l);
                    let ik_jl = st(n, i, k, l | 1 << j);
                    let ij_l = st(n, i, j, l);
                    if semigraphoid {
                        // ij|kL & ik|L <=> ik|jL & ij|L
                        rules.push((vec![ij_kl, ik_l], ik_jl));
                        rules.push((vec![ij_kl, ik_l], ij_l));
                        rules.push((vec![ik_jl, ij_l], ij_kl));
                        rules.push((vec![ik_jl, ij_l], ik_l));
                    }
                    if intersection {
                        rules.push((vec![ij_kl, ik_jl], ij_l));
                        rules.push((vec![ij_kl, ik_jl], ik_l));
                    }
                    if composition {
                        rules.push((vec![ij_l, ik_l], ij_kl));
                        rules.push((vec![ij_l, ik_l], ik_jl));
                    }
                }
            }
        }
    }
    rules
}

pub fn forward_chain(rules: &[(Vec<usize>, usize)], start: &BitSet) -> BitSet {
    let mut cur = start.clone();
    loop {
        let mut changed = false;
        for (ante, cons) in rules {
            if !cur.contains(*cons) && ante.iter().all(|&a| cur.contains(a)) {
                cur.insert(*cons);
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

pub fn respects(rules: &[(Vec<usize>, usize)], m: &BitSet) -> bool {
    rules.iter().all(|(a, c)| m.contains(*c) || !a.iter().all(|&x| m.contains(x)))
}

/// All subsets of a universe of at most 20 elements satisfying `keep`.
pub fn brute_family(u: usize, keep: impl Fn(&BitSet) -> bool) -> Vec<BitSet> {
    (0u64..1 << u)
        .map(|w| BitSet::from_words(u, vec![w]))
        .filter(|b| keep(b))
        .collect()
}

/// Intersection of the members containing `y`.
pub fn smallest_containing(family: &[BitSet], y: &BitSet) -> BitSet {
    let mut acc = BitSet::full(y.len());
    for m in family {
        if y.is_subset(m) {
            acc.intersect_with(m);
        }
    }
    acc
}

pub fn random_bits(rng: &mut impl rand::Rng, u: usize, density: f64) -> BitSet {
    BitSet::from_indices(u, (0..u).filter(|_| rng.gen_bool(density)))
}
