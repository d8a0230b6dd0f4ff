//! Self-adhesive closures at a set, the full self-adhesive closure, double
//! self-adhesion and the k-fold variant.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::closure::{is_member, with_oracle};
use crate::frames::FrameSpec;
use crate::ground::{GroundSet, VarSet, MAX_GROUND};
use crate::model::{expand_global, CIModel};
use crate::statement::{sta_size, statements};
use crate::{CiError, Result};

/// Which sets `L` are tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LPolicy {
    /// `2 ≤ |L| ≤ n−2`; needs a frame closed under lifting and tight replication.
    Reduced,
    /// `0 ≤ |L| ≤ n−1`.
    Full,
}

impl FromStr for LPolicy {
    type Err = CiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(LPolicy::Reduced),
            "full" => Ok(LPolicy::Full),
            _ => Err(CiError::Unsupported(format!("unknown policy `{s}`"))),
        }
    }
}

impl fmt::Display for LPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LPolicy::Reduced => "reduced",
            LPolicy::Full => "full",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SelfAdhesionConfig {
    pub frame: FrameSpec,
    pub policy: LPolicy,
    /// Restart the sweep after every change; otherwise union whole sweeps.
    pub restart_on_change: bool,
}

impl SelfAdhesionConfig {
    pub fn new(frame: FrameSpec) -> SelfAdhesionConfig {
        SelfAdhesionConfig {
            frame,
            policy: LPolicy::Reduced,
            restart_on_change: true,
        }
    }

    pub fn with_policy(mut self, policy: LPolicy) -> SelfAdhesionConfig {
        self.policy = policy;
        self
    }

    pub fn full_sweep(mut self) -> SelfAdhesionConfig {
        self.restart_on_change = false;
        self
    }

    /// The reduced policy falls back to full when the frame lacks either flag.
    pub fn effective_policy(&self) -> LPolicy {
        let f = &self.frame;
        if f.closed_under_lifting && f.closed_under_tight_replication {
            self.policy
        } else {
            LPolicy::Full
        }
    }

    pub fn l_sets(&self, n: usize) -> Vec<VarSet> {
        l_sets(n, self.effective_policy())
    }
}

/// Subsets of `{0..k}` of every size in `sizes`, by size then lexicographically
/// on their sorted elements.
pub fn subsets_by_size(k: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<VarSet> {
    fn rec(start: usize, k: usize, left: usize, acc: VarSet, out: &mut Vec<VarSet>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for x in start..k {
            rec(x + 1, k, left - 1, acc | 1 << x, out);
        }
    }
    let mut out = Vec::new();
    for s in sizes {
        if s <= k {
            rec(0, k, s, 0, &mut out);
        }
    }
    out
}

pub fn l_sets(n: usize, policy: LPolicy) -> Vec<VarSet> {
    match policy {
        LPolicy::Reduced if n >= 4 => subsets_by_size(n, 2..=n - 2),
        LPolicy::Reduced => Vec::new(),
        LPolicy::Full => subsets_by_size(n, 0..=n.saturating_sub(1)),
    }
}

/// Index tables for `M ∪ copy(M) ∪ [N∖L, copies | L]` over `n + k·|N∖L|`
/// variables: the original `N` keeps indices `0..n`, copy `c` of the
/// `p`-th element of `N∖L` gets `n + (c−1)·|N∖L| + p`.
struct Layout {
    big: usize,
    /// Statement index in the big ground for each copy (0 = identity).
    embeds: Vec<Vec<usize>>,
    global: BitSet,
}

impl Layout {
    fn get(n: usize, l: VarSet, k: usize) -> Result<Arc<Layout>> {
        type Cache = Mutex<HashMap<(usize, VarSet, usize), Arc<Layout>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(x) = cache.lock().unwrap().get(&(n, l, k)) {
            return Ok(x.clone());
        }
        let x = Arc::new(Layout::build(n, l, k)?);
        cache.lock().unwrap().insert((n, l, k), x.clone());
        Ok(x)
    }

    fn build(n: usize, l: VarSet, k: usize) -> Result<Layout> {
        let rest: Vec<usize> = (0..n).filter(|&x| l >> x & 1 == 0).collect();
        let big = n + k * rest.len();
        if big > MAX_GROUND {
            return Err(CiError::GroundTooLarge(big));
        }
        let maps: Vec<Vec<usize>> = (0..=k)
            .map(|c| {
                let mut map: Vec<usize> = (0..n).collect();
                if c > 0 {
                    for (p, &x) in rest.iter().enumerate() {
                        map[x] = n + (c - 1) * rest.len() + p;
                    }
                }
                map
            })
            .collect();
        let embeds = maps
            .iter()
            .map(|map| statements(n).iter().map(|s| s.mapped(map).index(big)).collect())
            .collect();
        let side = |c: usize| rest.iter().fold(0 as VarSet, |acc, &x| acc | 1 << maps[c][x]);
        let bg = Arc::new(GroundSet::standard(big));
        let mut global = BitSet::new(sta_size(big));
        let parts = k + 1;
        for p in 1u32..1 << parts {
            let mut q = (!p) & ((1 << parts) - 1);
            while q != 0 {
                if p < q {
                    let i = (0..parts).filter(|c| p >> c & 1 == 1).fold(0, |a, c| a | side(c));
                    let j = (0..parts).filter(|c| q >> c & 1 == 1).fold(0, |a, c| a | side(c));
                    global.union_with(expand_global(&bg, i, j, l)?.bits());
                }
                q = (q - 1) & !p & ((1 << parts) - 1);
            }
        }
        Ok(Layout { big, embeds, global })
    }

    fn xi(&self, m: &BitSet) -> BitSet {
        let mut xi = self.global.clone();
        for e in &self.embeds {
            for t in m.iter() {
                xi.insert(e[t]);
            }
        }
        xi
    }

    fn candidates(&self, m: &BitSet) -> BitSet {
        let id = &self.embeds[0];
        BitSet::from_indices(sta_size(self.big), (0..m.len()).filter(|&t| !m.contains(t)).map(|t| id[t]))
    }

    fn pull_back(&self, forced: &BitSet, n: usize) -> BitSet {
        let id = &self.embeds[0];
        BitSet::from_indices(sta_size(n), (0..sta_size(n)).filter(|&t| forced.contains(id[t])))
    }
}

fn check_l(n: usize, l: VarSet) -> Result<()> {
    if n < 32 && l >> n != 0 {
        return Err(CiError::VariableOutOfRange { index: 31 - l.leading_zeros() as usize, n });
    }
    Ok(())
}

/// Statements of `sta(N) ∖ M` added by the (k-fold) self-adhesive closure at `L`.
pub fn sa_additions(frame: FrameSpec, n: usize, m: &BitSet, l: VarSet, k: usize) -> Result<BitSet> {
    check_l(n, l)?;
    let lay = Layout::get(n, l, k)?;
    let xi = lay.xi(m);
    let cand = lay.candidates(m);
    let forced = with_oracle(frame, lay.big, |o| o.forced(&xi, &cand))?;
    Ok(lay.pull_back(&forced, n))
}

/// True when `M` is not self-adhesive at `L` (the closure adds something).
pub fn sa_fails_at(frame: FrameSpec, n: usize, m: &BitSet, l: VarSet) -> Result<bool> {
    check_l(n, l)?;
    let lay = Layout::get(n, l, 1)?;
    let xi = lay.xi(m);
    let cand = lay.candidates(m);
    with_oracle(frame, lay.big, |o| o.forces_any(&xi, &cand))
}

/// `F^sa(M|L)`: close `M ∪ copy(M) ∪ [N∖L, copy(N∖L) | L]` and marginalize.
pub fn sa_closure_at(m: &CIModel, l: VarSet, frame: FrameSpec) -> Result<CIModel> {
    let add = sa_additions(frame, m.n(), m.bits(), l, 1)?;
    CIModel::from_bits(m.ground().clone(), m.bits().union(&add))
}

/// The labelled ground `N` followed by primed copies of `N∖L` (k copies,
/// suffixed `'1`, `'2`, ... when `k > 1`).
pub fn copy_ground(ground: &GroundSet, l: VarSet, k: usize) -> Result<Arc<GroundSet>> {
    let mut taken: Vec<String> = ground.names().to_vec();
    let mut extra = Vec::new();
    for c in 1..=k {
        for x in (0..ground.len()).filter(|&x| l >> x & 1 == 0) {
            let base = ground.name(x);
            let name = if k == 1 {
                GroundSet::fresh_label(base, &taken)
            } else {
                let name = format!("{base}'{c}");
                if taken.contains(&name) {
                    GroundSet::fresh_label(&name, &taken)
                } else {
                    name
                }
            };
            taken.push(name.clone());
            extra.push(name);
        }
    }
    Ok(Arc::new(ground.extended(extra)?))
}

/// The least self-adhesion `M ∪ copy(M) ∪ [N∖L, copy(N∖L) | L]` over the
/// labelled ground of [`copy_ground`].
pub fn least_self_adhesion(m: &CIModel, l: VarSet) -> Result<CIModel> {
    check_l(m.n(), l)?;
    let lay = Layout::get(m.n(), l, 1)?;
    CIModel::from_bits(copy_ground(m.ground(), l, 1)?, lay.xi(m.bits()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaVerdict {
    SelfAdhesive,
    /// First failing `L` in size-then-lex order.
    Fails(VarSet),
}

impl SaVerdict {
    pub fn is_self_adhesive(&self) -> bool {
        matches!(self, SaVerdict::SelfAdhesive)
    }
}

/// Self-adhesivity of a family member; `M` is not re-checked.
pub fn sa_verdict_bits(config: &SelfAdhesionConfig, n: usize, m: &BitSet) -> Result<SaVerdict> {
    for l in config.l_sets(n) {
        if sa_fails_at(config.frame, n, m, l)? {
            return Ok(SaVerdict::Fails(l));
        }
    }
    Ok(SaVerdict::SelfAdhesive)
}

pub fn is_self_adhesive(m: &CIModel, config: &SelfAdhesionConfig) -> Result<SaVerdict> {
    if !is_member(config.frame, m)? {
        return Err(CiError::NotMember(config.frame.to_string()));
    }
    sa_verdict_bits(config, m.n(), m.bits())
}

/// Least model containing `M` that lies in the frame and is self-adhesive at
/// every `L` of the policy.
pub fn sa_closure(m: &CIModel, config: &SelfAdhesionConfig) -> Result<CIModel> {
    let n = m.n();
    let frame = config.frame;
    let mut cur = with_oracle(frame, n, |o| o.closure_bits(m.bits()))?;
    let ls = config.l_sets(n);
    if config.restart_on_change {
        'sweep: loop {
            for &l in &ls {
                let add = sa_additions(frame, n, &cur, l, 1)?;
                if add.count() > 0 {
                    cur.union_with(&add);
                    continue 'sweep;
                }
            }
            break;
        }
    } else {
        loop {
            let adds = ls
                .par_iter()
                .map(|&l| sa_additions(frame, n, &cur, l, 1))
                .collect::<Result<Vec<_>>>()?;
            let mut next = cur.clone();
            for a in &adds {
                next.union_with(a);
            }
            if next == cur {
                break;
            }
            cur = with_oracle(frame, n, |o| o.closure_bits(&next))?;
        }
    }
    CIModel::from_bits(m.ground().clone(), cur)
}

/// Closure under self-adhesion relative to `F^sa`, at every `E` with
/// `|E| ∈ {2, 3}`; four variables only.
pub fn sa2_closure(m: &CIModel, frame: FrameSpec) -> Result<CIModel> {
    if m.n() != 4 {
        return Err(CiError::Unsupported(format!(
            "double self-adhesion is implemented for 4 variables (got {})",
            m.n()
        )));
    }
    let inner = SelfAdhesionConfig::new(frame);
    let mut cur = sa_closure(m, &inner)?;
    let es = subsets_by_size(4, 2..=3);
    'sweep: loop {
        for &e in &es {
            let lay = Layout::get(4, e, 1)?;
            let big = Arc::new(GroundSet::standard(lay.big));
            let xi = CIModel::from_bits(big, lay.xi(cur.bits()))?;
            let closed = sa_closure(&xi, &inner)?;
            let add = lay.pull_back(closed.bits(), 4).difference(cur.bits());
            if add.count() > 0 {
                cur = CIModel::from_bits(cur.ground().clone(), cur.bits().union(&add))?;
                continue 'sweep;
            }
        }
        break;
    }
    Ok(cur)
}

/// One closure step of k-fold self-adhesion at `L`: `k` copies of `N∖L`,
/// every pair of disjoint groups of copies independent given `L`.
pub fn k_fold_sa_closure_at(m: &CIModel, l: VarSet, k: usize, frame: FrameSpec) -> Result<CIModel> {
    if k == 0 {
        return Err(CiError::Unsupported("k must be at least 1".into()));
    }
    let add = sa_additions(frame, m.n(), m.bits(), l, k)?;
    CIModel::from_bits(m.ground().clone(), m.bits().union(&add))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_set_order() {
        assert_eq!(l_sets(4, LPolicy::Reduced), vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert!(l_sets(3, LPolicy::Reduced).is_empty());
        let full = l_sets(3, LPolicy::Full);
        assert_eq!(full, vec![0, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn graphoids_use_full_policy() {
        let c = SelfAdhesionConfig::new(FrameSpec::new(crate::frames::FrameKind::Graphoid));
        assert_eq!(c.effective_policy(), LPolicy::Full);
        assert_eq!(SelfAdhesionConfig::new(FrameSpec::semigraphoid()).effective_policy(), LPolicy::Reduced);
    }

    #[test]
    fn layout_global_part() {
        // n = 2, L = ∅: one copy, [ab, a'b' | ∅] has 4 pairs × 4 conditioning sets.
        let lay = Layout::build(2, 0, 1).unwrap();
        assert_eq!(lay.big, 4);
        assert_eq!(lay.global.count(), 16);
        let two = Layout::build(2, 0, 2).unwrap();
        assert_eq!(two.big, 6);
        assert!(Layout::build(4, 0, 3).is_err());
    }

    #[test]
    fn copy_ground_labels() {
        let g = GroundSet::standard(3);
        let one = copy_ground(&g, 0b001, 1).unwrap();
        assert_eq!(one.names(), ["a", "b", "c", "b'", "c'"]);
        let two = copy_ground(&g, 0b001, 2).unwrap();
        assert_eq!(two.names(), ["a", "b", "c", "b'1", "c'1", "b'2", "c'2"]);
    }
}
