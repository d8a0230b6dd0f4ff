use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ci")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const ADHESION_CLOSURE: &str = "\
ground: a b c a'
a b | c
a b | c a'
a a' | c
a a' | b c
b a' | c
b a' | a c
";

#[test]
fn closure_of_adhesion_example() {
    let f = fixture("adhesion.ci");
    let o = ci(&["closure", "--frame", "semigraphoid", "--in", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), ADHESION_CLOSURE);
}

#[test]
fn closing_a_closed_model_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "closed.ci", ADHESION_CLOSURE);
    let out = dir.path().join("again.ci");
    let o = ci(&["closure", "--in", &p, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(out).unwrap(), ADHESION_CLOSURE);
}

#[test]
fn transcript_lists_each_candidate() {
    let f = fixture("adhesion.ci");
    let o = ci(&["closure", "--in", f.to_str().unwrap(), "--transcript"]);
    let lines: Vec<String> = stderr(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 24 - 3);
    assert!(lines.iter().all(|l| l.ends_with(" : IN") || l.ends_with(" : OUT")));
    assert_eq!(lines.iter().filter(|l| l.ends_with(" : IN")).count(), 3);
    assert!(lines.contains(&"a a' | c : IN".to_string()));
}

#[test]
fn structural_guard_on_five_variables() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "five.ci", "ground: a b c d e\na b | c\n");
    let o = ci(&["closure", "--frame", "structural", "--in", &p]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).is_empty());
    let o = ci(&["closure", "--frame", "structural", "--backend", "lp", "--in", &p]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "ground: a b c d e\na b | c\n");
}

#[test]
fn structural_axioms_and_cone_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "m.ci", "ground: a b c d\na b | c\na c | d\na d | b\n");
    let sat = ci(&["closure", "--frame", "structural", "--in", &p]);
    let lp = ci(&["closure", "--frame", "structural", "--backend", "lp", "--in", &p]);
    assert_eq!(code(&sat), 0);
    assert_eq!(stdout(&sat), stdout(&lp));
    assert_eq!(stdout(&sat).lines().count(), 1 + 6);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.ci", "ground: a b c\na b | z\n");
    assert_eq!(code(&ci(&["closure", "--in", &p])), 2);
    let p = write(dir.path(), "nohdr.ci", "a b | c\n");
    assert_eq!(code(&ci(&["dual", "--in", &p])), 2);
    assert_eq!(code(&ci(&["closure", "--in", "/no/such/file"])), 2);
    assert_eq!(code(&ci(&["closure", "--frame", "gaussoid", "--in", &p])), 2);
    assert_eq!(code(&ci(&["closure", "--bogus", "--in", &p])), 2);
}

#[test]
fn two_variable_catalogue_row() {
    let o = ci(&["catalogue", "--frame", "semigraphoid", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().nth(1), Some("semigraphoid,2,2,1,1,1,1"));
}

#[test]
fn compositional_graphoid_catalogue_row() {
    let o = ci(&["catalogue", "--frame", "comp-graphoid", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().nth(1), Some("comp-graphoid,2084,157,470,30,6,1"));
}

#[test]
fn self_adhesive_semigraphoid_catalogue_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sg");
    let o = ci(&["catalogue", "--n", "4", "--selfadhesive", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(1), Some("semigraphoid^sa,23190,1352,385,29,31,9"));
    let models = std::fs::read_to_string(out.join("models.cat")).unwrap();
    assert_eq!(models.lines().count(), 1 + 23190);
    let coatoms = std::fs::read_to_string(out.join("coatoms.cat")).unwrap();
    assert_eq!(coatoms.lines().count(), 1 + 31);
    let basis = std::fs::read_to_string(out.join("basis.txt")).unwrap();
    assert!(basis.starts_with("ground: a b c d\n"));
}

#[test]
fn cap_exits_four_with_partial_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cap");
    let o = ci(&["catalogue", "--n", "4", "--cap", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let models = std::fs::read_to_string(out.join("models.cat")).unwrap();
    assert_eq!(models.lines().count(), 1 + 10 + 1);
    assert_eq!(models.lines().last(), Some("# partial"));
}

#[test]
fn screening_internal_coatoms() {
    let o = ci(&["screen", "--frame", "semigraphoid", "--n", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().last().unwrap().starts_with("31 self-adhesive / 37"), "{out}");
    assert_eq!(out.lines().filter(|l| l.contains(",excluded,")).count(), 1);
}

#[test]
fn screening_sample_rays() {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/rays5_sample.txt");
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let o = ci(&["screen", "--in", sample.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().next(), Some("id,orbit_size,verdict,witness_L,millis"));
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn three_variable_basis() {
    let o = ci(&["basis", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
    assert!(stderr(&o).contains("6 implications in 1 types"));
}

#[test]
fn member_and_implication() {
    let dir = tempfile::tempdir().unwrap();
    let closed = write(dir.path(), "closed.ci", ADHESION_CLOSURE);
    assert_eq!(stdout(&ci(&["member", "--in", &closed])), "true\n");
    assert_eq!(stdout(&ci(&["member", "--in", fixture("adhesion.ci").to_str().unwrap()])), "false\n");
    let imps = write(
        dir.path(),
        "imps.txt",
        "ground: a b c\na b | ; a c | b => a c | ; a b | c\na b | => a c |\n",
    );
    let o = ci(&["implication", "--in", &imps]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().map(|l| l.rsplit(" : ").next().unwrap()).collect();
    assert_eq!(lines, ["valid", "invalid"]);
}

#[test]
fn self_adhesion_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "m.ci", "ground: a b c d\na b | c\na c | d\na d | b\n");
    let whole = ci(&["sa-closure", "--in", &p]);
    assert_eq!(code(&whole), 0);
    let at = ci(&["sa-closure", "--in", &p, "--at", "bd"]);
    assert_eq!(code(&at), 0);
    let two = ci(&["kfold", "--in", &p, "--at", "bd", "--k", "2"]);
    assert_eq!(code(&two), 0);
    let set = |o: &Output| stdout(o).lines().map(String::from).collect::<std::collections::BTreeSet<_>>();
    assert!(set(&at).is_subset(&set(&two)));
    assert!(set(&at).is_subset(&set(&whole)));
    let three = write(dir.path(), "t.ci", "ground: a b c\na b | c\n");
    assert_eq!(code(&ci(&["sa2-closure", "--in", &three])), 3);
}

#[test]
fn model_transformations() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "m.ci", "ground: a b c d\na b |\na b | c\na b | d\nc d | a b\n");
    let dual = ci(&["dual", "--in", &p]);
    assert_eq!(stdout(&dual), "ground: a b c d\na b | c\na b | d\na b | c d\nc d |\n");
    let lifted = ci(&["lift", "--in", &p, "--ground", "a,b,c,d,e"]);
    assert_eq!(code(&lifted), 0);
    assert!(stdout(&lifted).starts_with("ground: a b c d e\n"));
    let rep = ci(&["replicate", "--in", &p, "--var", "a", "--as", "a'"]);
    assert_eq!(code(&rep), 0);
    assert!(stdout(&rep).starts_with("ground: a b c d a'\n"));
    let exp = ci(&["expand", "--ground", "a,b,c,d", "ab,c|d"]);
    assert_eq!(stdout(&exp), "ground: a b c d\na c | d\na c | b d\nb c | d\nb c | a d\n");
    let graph = ci(&["graph-model", "--ground", "a,b,c", "--edges", "a-b,b-c"]);
    assert_eq!(stdout(&graph), "ground: a b c\na c | b\n");
    assert_eq!(stdout(&ci(&["dual", "--in", &p])), stdout(&dual));
}
