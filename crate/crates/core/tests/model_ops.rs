mod common;

use std::sync::Arc;

use ci_core::statement::{index_statement, statement_at};
use ci_core::{least_adhesion, sta_size, BitSet, CIModel, GroundSet, VariableMap, VarSet};
use common::*;
use proptest::prelude::*;

fn bits_strategy(n: usize) -> impl Strategy<Value = BitSet> {
    proptest::collection::vec(any::<bool>(), sta_size(n))
        .prop_map(|v| BitSet::from_indices(v.len(), v.iter().enumerate().filter(|x| *x.1).map(|x| x.0)))
}

fn model_strategy() -> impl Strategy<Value = CIModel> {
    (3usize..=5).prop_flat_map(|n| bits_strategy(n).prop_map(move |b| CIModel::from_bits(std_ground(n), b).unwrap()))
}

fn target_ground(n: usize) -> Arc<GroundSet> {
    Arc::new(GroundSet::new((0..n).map(|i| format!("x{i}"))).unwrap())
}

fn positions(set: VarSet) -> Vec<usize> {
    (0..32).filter(|&v| set >> v & 1 == 1).collect()
}

/// `f` restricted to `L`, between the restricted grounds.
fn restrict_map(f: &VariableMap, l: VarSet) -> VariableMap {
    let src = Arc::new(f.source().restrict(l));
    let fl = f.apply_set(l);
    let dst = Arc::new(f.target().restrict(fl));
    let dst_pos = positions(fl);
    let image = positions(l)
        .iter()
        .map(|&v| dst_pos.iter().position(|&t| t == f.image()[v]).unwrap())
        .collect();
    VariableMap::new(src, dst, image).unwrap()
}

#[test]
fn statement_index_round_trip() {
    for n in 2..=12 {
        let g = GroundSet::standard(n);
        let step = if n > 8 { 97 } else { 1 };
        for idx in (0..sta_size(n)).step_by(step) {
            let s = statement_at(n, idx).unwrap();
            assert_eq!(s.index(n), idx);
            assert_eq!(index_statement(&g, s.i as usize, s.j as usize, s.k).unwrap(), idx);
        }
    }
}

#[test]
fn duality_does_not_commute_with_marginalization() {
    let g = ground("a b c");
    let m = model(&g, "ab|-");
    let ab = g.set_of(&["a", "b"]).unwrap();
    let left = m.dualize().marginalize(ab).unwrap();
    let right = m.marginalize(ab).unwrap().dualize();
    assert!(left.is_empty());
    assert_eq!(right.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn copying_commutes_with_marginalization(
        m in model_strategy(),
        perm_seed in any::<u64>(),
        l_seed in any::<u32>(),
    ) {
        let n = m.n();
        let l = l_seed & ((1 << n) - 1);
        let mut image: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            image.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let f = VariableMap::new(m.ground().clone(), target_ground(n), image).unwrap();
        let left = m.copy_model(&f).unwrap().marginalize(f.apply_set(l)).unwrap();
        let right = m.marginalize(l).unwrap().copy_model(&restrict_map(&f, l)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn intersection_commutes_with_copying_and_marginalization(
        a in bits_strategy(4),
        b in bits_strategy(4),
        l in 0u32..16,
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let g = std_ground(4);
        let ma = CIModel::from_bits(g.clone(), a).unwrap();
        let mb = CIModel::from_bits(g.clone(), b).unwrap();
        let f = VariableMap::new(g.clone(), target_ground(4), perm).unwrap();
        prop_assert_eq!(
            ma.intersection(&mb).copy_model(&f).unwrap(),
            ma.copy_model(&f).unwrap().intersection(&mb.copy_model(&f).unwrap())
        );
        prop_assert_eq!(
            ma.intersection(&mb).marginalize(l).unwrap(),
            ma.marginalize(l).unwrap().intersection(&mb.marginalize(l).unwrap())
        );
    }

    #[test]
    fn duality_commutes_with_copying(m in model_strategy(), perm_seed in any::<u64>()) {
        let n = m.n();
        let mut image: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            image.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let f = VariableMap::new(m.ground().clone(), target_ground(n), image).unwrap();
        prop_assert_eq!(m.dualize().copy_model(&f).unwrap(), m.copy_model(&f).unwrap().dualize());
        prop_assert_eq!(m.dualize().dualize(), m);
    }

    #[test]
    fn lift_then_marginalize_is_identity(m in model_strategy()) {
        let n = m.n();
        let o = Arc::new(m.ground().extended(["z"]).unwrap());
        let lifted = m.lift(&o).unwrap();
        prop_assert_eq!(lifted.marginalize(m.ground().all()).unwrap(), m.clone());
        // every statement touching the new variable is present
        let z = 1u32 << n;
        for s in ci_core::statements(n + 1) {
            if s.pair() & z != 0 {
                prop_assert!(lifted.contains(s));
            }
        }
    }

    #[test]
    fn tight_replication_then_marginalize_is_identity(m in model_strategy(), u in 0usize..3) {
        let label = m.ground().name(u).to_string();
        let r = m.tight_replicate(&label, "v").unwrap();
        prop_assert_eq!(r.marginalize(m.ground().all()).unwrap(), m.clone());
    }

    #[test]
    fn least_adhesion_restricts_to_its_inputs(
        a in bits_strategy(3),
        b in bits_strategy(3),
    ) {
        // N = abc and M = bcd share only bc|-; make the two agree on it
        let n = ground("a b c");
        let mm = ground("b c d");
        let m1 = CIModel::from_bits(n.clone(), a).unwrap();
        let mut m2 = CIModel::from_bits(mm.clone(), b).unwrap();
        let none: &[&str] = &[];
        let bc2 = mm.statement("b", "c", none).unwrap();
        m2.remove(&bc2);
        if m1.contains(&n.statement("b", "c", none).unwrap()) {
            m2.insert(bc2).unwrap();
        }
        let adh = least_adhesion(&m1, &m2).unwrap();
        prop_assert_eq!(adh.marginalize_labels(&["a", "b", "c"]).unwrap(), m1);
        let back = adh.marginalize_labels(&["b", "c", "d"]).unwrap();
        prop_assert_eq!(back.relabel_to(&mm).unwrap(), m2);
    }
}
