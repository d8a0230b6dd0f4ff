use ci_sat::{
    brute_force_masks, enumerate_models, EngineKind, EnumConfig, EnumMethod, ExternalSolver, Cnf,
    Lit, SatEngine, Solver,
};
use proptest::prelude::*;

fn cnf_strategy(max_vars: usize) -> impl Strategy<Value = Cnf> {
    (1..=max_vars).prop_flat_map(|n| {
        let lit = (0..n, any::<bool>()).prop_map(|(v, neg)| Lit::new(ci_sat::Var(v as u32), neg));
        let clause = prop::collection::vec(lit, 1..4);
        prop::collection::vec(clause, 0..(3 * n)).prop_map(move |cs| {
            let mut cnf = Cnf::new(n);
            for c in cs {
                cnf.add_clause(c).unwrap();
            }
            cnf
        })
    })
}

fn mask_of(model: &[bool]) -> u32 {
    model
        .iter()
        .enumerate()
        .fold(0, |m, (v, &b)| if b { m | 1 << v } else { m })
}

fn assumption_strategy(n: usize) -> impl Strategy<Value = Vec<Lit>> {
    prop::collection::btree_map(0..n, any::<bool>(), 0..=n.min(4)).prop_map(|m| {
        m.into_iter()
            .map(|(v, neg)| Lit::new(ci_sat::Var(v as u32), neg))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solve_matches_brute_force(
        (cnf, queries) in cnf_strategy(10).prop_flat_map(|c| {
            let n = c.num_vars();
            (Just(c), prop::collection::vec(assumption_strategy(n), 1..6))
        })
    ) {
        let all = brute_force_masks(&cnf).unwrap();
        let mut solver = Solver::from_cnf(&cnf);
        for assumptions in &queries {
            let expected = all.iter().any(|&a| {
                assumptions.iter().all(|l| (a >> l.var().0 & 1 == 1) != l.is_negative())
            });
            let got = solver.solve(assumptions).unwrap();
            prop_assert_eq!(got, expected);
            if got {
                prop_assert!(cnf.eval(solver.model()));
                prop_assert!(assumptions.iter().all(|l| l.eval(solver.model())));
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force(cnf in cnf_strategy(9)) {
        let mut expected = brute_force_masks(&cnf).unwrap();
        expected.sort();
        for method in [EnumMethod::Partition, EnumMethod::Blocking] {
            let cfg = EnumConfig { method, ..EnumConfig::default() };
            let e = enumerate_models(&cnf, &cfg).unwrap();
            prop_assert!(e.complete);
            let mut got: Vec<u32> = e.models.iter().map(|m| mask_of(m)).collect();
            got.sort();
            prop_assert_eq!(&got, &expected);
        }
    }

    #[test]
    fn query_order_is_invisible(cnf in cnf_strategy(8)) {
        let n = cnf.num_vars();
        let queries: Vec<Vec<Lit>> = (0..n).flat_map(|v| [vec![Lit::positive(v)], vec![Lit::negative(v)]]).collect();
        let mut fwd = Solver::from_cnf(&cnf);
        let a: Vec<bool> = queries.iter().map(|q| fwd.solve(q).unwrap()).collect();
        let mut rev = Solver::from_cnf(&cnf);
        let mut b: Vec<bool> = queries.iter().rev().map(|q| rev.solve(q).unwrap()).collect();
        b.reverse();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn incremental_clause_addition() {
    let mut s = Solver::new(3);
    assert!(s.solve(&[]).unwrap());
    s.add_clause(&[Lit::positive(0), Lit::positive(1)]).unwrap();
    s.add_clause(&[Lit::negative(0)]).unwrap();
    assert!(s.solve(&[]).unwrap());
    assert!(s.model()[1]);
    assert!(!s.solve(&[Lit::negative(1)]).unwrap());
    s.add_clause(&[Lit::negative(1)]).unwrap();
    assert!(!s.solve(&[]).unwrap());
}

#[test]
fn external_bridge_agrees_with_embedded() {
    let exe = std::path::PathBuf::from(env!("CARGO_BIN_EXE_dimacs-solve"));
    let mut cnf = Cnf::new(4);
    cnf.add_clause(vec![Lit::negative(0), Lit::negative(1), Lit::positive(2)]).unwrap();
    cnf.add_clause(vec![Lit::negative(2), Lit::positive(3)]).unwrap();
    let mut ext = ExternalSolver::new(exe.clone(), cnf.clone());
    let mut emb = Solver::from_cnf(&cnf);
    let queries = [
        vec![],
        vec![Lit::positive(0), Lit::positive(1)],
        vec![Lit::positive(0), Lit::positive(1), Lit::negative(3)],
    ];
    for q in &queries {
        let a = ext.solve(q).unwrap();
        let b = SatEngine::solve(&mut emb, q).unwrap();
        assert_eq!(a, b);
        if a {
            assert!(cnf.eval(ext.model()));
        }
    }
    let cfg = EnumConfig { engine: EngineKind::External(exe), ..EnumConfig::default() };
    let via_ext = enumerate_models(&cnf, &cfg).unwrap();
    let via_emb = enumerate_models(&cnf, &EnumConfig::default()).unwrap();
    assert_eq!(via_ext.models, via_emb.models);
}

#[test]
fn missing_external_solver_is_an_error() {
    let mut ext = ExternalSolver::new("/nonexistent/solver".into(), Cnf::new(1));
    assert!(ext.solve(&[]).is_err());
}
