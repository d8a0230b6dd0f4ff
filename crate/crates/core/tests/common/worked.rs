//! Worked examples with their exact inputs and outputs. Each check panics
//! on mismatch.

use ci_core::closure::{frame_closure, is_member};
use ci_core::frames::{FrameKind, FrameSpec};
use ci_core::graph::UndirectedGraph;
use ci_core::lattice::*;
use ci_core::selfadhesion::*;
use ci_core::{expand_global, least_adhesion, BitSet, CIModel, CiError};
use super::*;

fn sg() -> FrameSpec {
    FrameSpec::semigraphoid()
}

fn strum() -> FrameSpec {
    FrameSpec::structural()
}

fn sa_member(m: &CIModel, frame: FrameSpec) -> bool {
    is_member(frame, m).unwrap() && is_self_adhesive(m, &SelfAdhesionConfig::new(frame)).unwrap().is_self_adhesive()
}

/// x, y, z, w as elements 0..4.
fn toy_set(s: &str) -> BitSet {
    BitSet::from_indices(4, s.chars().map(|c| "xyzw".find(c).unwrap()))
}

fn toy_family() -> Vec<BitSet> {
    ["xyzw", "xyz", "xyw", "xy", "x"].iter().map(|s| toy_set(s)).collect()
}

fn imp(p: &str, c: &str) -> BasisImplication {
    BasisImplication { premise: toy_set(p), consequent: toy_set(c) }
}

pub fn support_set_of_two_statements() {
    let g = ground("a b c d");
    let m = model(&g, "ab|-, bc|-");
    assert_eq!(g.format_set(m.support_set()), "abc");
    assert_eq!(m.marginalize_labels(&["a", "b", "c"]).unwrap().len(), 2);
    assert_eq!(m.marginalize_labels(&["a", "b"]).unwrap().len(), 1);
}

pub fn dual_of_four_statement_model() {
    let g = ground("a b c d");
    let m = model(&g, "ab|cd, ab|d, ab|c, cd|-");
    assert_eq!(m.dualize(), model(&g, "ab|-, ab|c, ab|d, cd|ab"));
    assert!(is_member(strum(), &m).unwrap());
    assert!(is_member(strum(), &m.dualize()).unwrap());
}

pub fn toy_family_irreducibles_and_coatoms() {
    let cat = FamilyCatalogue::new(std_ground(4), toy_family());
    let mut irr = meet_irreducibles(&cat);
    irr.sort();
    let mut want = vec![toy_set("xyz"), toy_set("xyw"), toy_set("x")];
    want.sort();
    assert_eq!(irr, want);
    let mut co = coatoms(&cat);
    co.sort();
    let mut want = vec![toy_set("xyz"), toy_set("xyw")];
    want.sort();
    assert_eq!(co, want);
    let o = FamilyOracle::new(4, toy_family());
    assert_eq!(o.close(&toy_set("")).unwrap(), toy_set("x"));
    assert_eq!(o.close(&toy_set("y")).unwrap(), toy_set("xy"));
    assert_eq!(o.close(&toy_set("xz")).unwrap(), toy_set("xyz"));
}

pub fn semigraphoids_over_three_variables() {
    let cat = enumerate_family(sg(), 3, 1000).unwrap();
    let s = summarize("semigraphoid", &cat);
    assert_eq!((s.models, s.types, s.irreducibles, s.irreducible_types), (22, 10, 5, 3));
    assert_eq!(s.coatoms, 5);
    let g = std_ground(3);
    let irr: Vec<CIModel> = meet_irreducibles(&cat)
        .into_iter()
        .map(|b| CIModel::from_bits(g.clone(), b).unwrap())
        .collect();
    for m in ["ab|-, ac|-, bc|-", "ab|c, ac|b, bc|a"] {
        assert!(irr.contains(&model(&g, m)), "{m}");
    }
    let third = model(&g, "ab|-, ab|c, ac|-, ac|b");
    let copies = orbit_of(third.bits(), 3);
    assert_eq!(copies.len(), 3);
    for c in copies {
        assert!(irr.iter().any(|m| *m.bits() == c));
    }
}

pub fn generator_of_toy_family() {
    let gen = vec![imp("", "x"), imp("z", "y"), imp("xw", "xyw")];
    let generated = brute_family(4, |b| gen.iter().all(|i| !i.premise.is_subset(b) || i.consequent.is_subset(b)));
    let mut want = toy_family();
    want.sort();
    let mut got = generated;
    got.sort();
    assert_eq!(got, want);
    for k in 0..gen.len() {
        let mut fewer = gen.clone();
        fewer.remove(k);
        assert_ne!(count_generated(&fewer, 4).unwrap(), 5);
    }
}

pub fn canonical_basis_of_toy_family() {
    let o = FamilyOracle::new(4, toy_family());
    let got = canonical_basis(&o).unwrap();
    let want = [imp("", "x"), imp("xz", "y"), imp("xw", "y")];
    assert_eq!(got.len(), 3);
    for w in &want {
        assert!(got.contains(w), "{w:?}");
    }
    assert_eq!(canonical_basis_literal(&o).unwrap(), got);
    let simpler = [imp("", "x"), imp("z", "y"), imp("w", "y")];
    assert_eq!(count_generated(&simpler, 4).unwrap(), 5);
}

pub fn canonical_basis_of_semigraphoids_over_three_variables() {
    let g = std_ground(3);
    let cat = enumerate_family(sg(), 3, 1000).unwrap();
    let o = FamilyOracle::new(6, cat.models().to_vec());
    let basis = canonical_basis(&o).unwrap();
    assert_eq!(basis.len(), 6);
    let types = implication_types(&basis, 3);
    assert_eq!(types.len(), 1);
    let want = BasisImplication {
        premise: model(&g, "ab|-, ac|b").into_bits(),
        consequent: model(&g, "ac|-, ab|c").into_bits(),
    };
    assert!(basis.contains(&want));
    assert!(is_implicatively_perfect(&o, &basis).unwrap());
    assert_eq!(count_generated(&basis, 6).unwrap(), 22);
}

pub fn semigraphoid_that_is_not_structural() {
    let g = ground("a b c d");
    let m = model(&g, "ab|c, ac|d, ad|b");
    assert!(is_member(sg(), &m).unwrap());
    assert!(!is_member(strum(), &m).unwrap());
    let cl = frame_closure(strum(), &m).unwrap();
    assert!(model(&g, "ab|d, ac|b, ad|c").is_subset(&cl));
}

pub fn consonance_amalgam_and_adhesion() {
    let n = ground("a b c d");
    let mm = ground("c d e");
    let m = model(&n, "ab|-, cd|-");
    let m2 = model(&mm, "cd|-, cd|e");
    let m3 = model(&mm, "cd|e");
    let big = ground("a b c d e");
    let glob = expand_global(&big, big.set_of(&["a", "b"]).unwrap(), big.set_of(&["e"]).unwrap(), big.set_of(&["c", "d"]).unwrap()).unwrap();
    assert_eq!(glob, model(&big, "ae|cd, ae|bcd, be|cd, be|acd"));
    let adh = least_adhesion(&m, &m2).unwrap();
    assert_eq!(adh.ground().names(), big.names());
    assert_eq!(adh.relabel_to(&big).unwrap(), model(&big, "ab|-, cd|-, cd|e, ae|cd, ae|bcd, be|cd, be|acd"));
    let amalgam = model(&big, "ab|-, cd|-, cd|e");
    assert!(amalgam.is_subset(&adh.relabel_to(&big).unwrap()));
    assert!(matches!(least_adhesion(&m, &m3), Err(CiError::NotConsonant)));
}

pub fn graph_model_is_self_adhesive_semigraphoid() {
    let g = ground("a b c");
    let graph = UndirectedGraph::from_edges(g.clone(), &[("a", "b"), ("a", "c")]).unwrap();
    let m = graph.separation_model();
    assert_eq!(m, model(&g, "bc|a"));
    assert!(sa_member(&m, sg()));
    let l = g.set_of(&["b", "c"]).unwrap();
    let adh = least_self_adhesion(&m, l).unwrap();
    let big = adh.ground().clone();
    assert_eq!(big.names(), &["a", "b", "c", "a'"]);
    let need = model(&big, "b c | a; b c | a'; a a' | b c");
    assert!(need.is_subset(&adh));
}

pub fn self_adhesion_of_single_statement() {
    let g = ground("a b c");
    let m = model(&g, "ab|c");
    let l = g.set_of(&["b", "c"]).unwrap();
    let adh = least_self_adhesion(&m, l).unwrap();
    let big = adh.ground().clone();
    assert_eq!(adh, model(&big, "a b | c; a' b | c; a a' | b c"));
    let cl = frame_closure(sg(), &adh).unwrap();
    let want = model(&big, "a b | c; a b | a' c; a a' | c; a a' | b c; a' b | c; a' b | a c");
    assert_eq!(cl, want);
    assert_eq!(cl.marginalize_labels(&["a", "b", "c"]).unwrap(), m);
    let copy = cl.marginalize_labels(&["a'", "b", "c"]).unwrap();
    assert_eq!(copy, model(copy.ground(), "a' b | c"));
    assert_eq!(sa_closure_at(&m, l, sg()).unwrap(), m);
}

pub fn lifting_to_a_new_variable() {
    let n = ground("a b");
    let o = ground("a b c");
    let empty = CIModel::empty(n.clone());
    assert_eq!(empty.lift(&o).unwrap(), model(&o, "ac|-, ac|b, bc|-, bc|a"));
    let m = model(&n, "ab|-");
    assert_eq!(m.lift(&o).unwrap(), CIModel::full(o.clone()));
}

pub fn tight_replication() {
    let n = ground("a b c");
    let big = ground("a b c d");
    let base = "ab|d, ab|cd, ac|d, ac|bd, bd|a, bd|ac, cd|a, cd|ab, ad|bc";
    let got = CIModel::empty(n.clone()).tight_replicate("a", "d").unwrap();
    assert_eq!(got.relabel_to(&big).unwrap(), model(&big, base));
    let got = model(&n, "ab|c").tight_replicate("a", "d").unwrap();
    let want = model(&big, &format!("{base}, ab|c, bd|c, ad|c"));
    assert_eq!(got.relabel_to(&big).unwrap(), want);
}

pub fn coatom_that_is_not_self_adhesive() {
    let g = ground("a b c d");
    let m = model(&g, "ab|c, ab|d, ab|cd, ac|b, ad|b, bc|a, bd|a, cd|-, cd|a, cd|b");
    let bd = g.set_of(&["b", "d"]).unwrap();
    for frame in [sg(), strum()] {
        let cat = enumerate_family(frame, 4, 100_000).unwrap();
        assert!(coatoms(&cat).contains(m.bits()), "{frame}");
    }
    let verdict = is_self_adhesive(&m, &SelfAdhesionConfig::new(sg())).unwrap();
    match verdict {
        SaVerdict::Fails(l) => assert_eq!(l.count_ones(), 2),
        SaVerdict::SelfAdhesive => panic!("coatom reported self-adhesive"),
    }
    let bc = model(&g, "bc|-");
    assert!(bc.is_subset(&sa_closure_at(&m, bd, sg()).unwrap()));
    let sub = model(&g, "ab|d, ad|b, bc|a, bd|a, cd|-");
    assert!(sub.is_subset(&m));
    assert!(bc.is_subset(&sa_closure_at(&sub, bd, sg()).unwrap()));
    assert!(sa_fails_at(sg(), 4, m.bits(), bd).unwrap());
}

pub fn self_adhesive_semigraphoid_with_non_self_adhesive_dual() {
    let g = ground("a b c d");
    let m = model(&g, "ab|c, ac|d, ad|b, bc|d");
    assert!(sa_member(&m, sg()));
    assert!(!is_member(strum(), &m).unwrap());
    let d = m.dualize();
    assert_eq!(d, model(&g, "ab|d, ac|b, ad|c, bc|a"));
    assert!(is_member(sg(), &d).unwrap());
    assert!(!is_member(strum(), &d).unwrap());
    assert!(!sa_member(&d, sg()));
    let closed = sa_closure(&d, &SelfAdhesionConfig::new(sg())).unwrap();
    assert!(closed.len() > d.len());
}

pub fn self_adhesive_structural_with_non_self_adhesive_dual() {
    let g = ground("a b c d");
    let m = model(&g, "ab|d, ac|d, ad|b, bc|-, bc|d");
    assert!(sa_member(&m, strum()));
    let d = m.dualize();
    assert_eq!(d, model(&g, "ab|c, ac|b, ad|c, bc|a, bc|ad"));
    assert!(is_member(strum(), &d).unwrap());
    assert!(!sa_member(&d, strum()));
}

pub fn frame_names_round_trip() {
    for k in FrameKind::ALL {
        assert_eq!(k.name().parse::<FrameKind>().unwrap(), k);
    }
}
