use std::io::Write;

use crate::{Cnf, Lit, SatError};

/// Writes `cnf` in DIMACS format. Each entry of `comments` becomes a `c` line
/// ahead of the problem line.
pub fn write_dimacs<W: Write>(cnf: &Cnf, comments: &[String], mut w: W) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "c {c}")?;
    }
    writeln!(w, "p cnf {} {}", cnf.num_vars(), cnf.len())?;
    for clause in cnf.clauses() {
        for l in clause {
            write!(w, "{} ", l.to_dimacs())?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

pub fn to_dimacs_string(cnf: &Cnf, comments: &[String]) -> String {
    let mut buf = Vec::new();
    write_dimacs(cnf, comments, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

/// Parses DIMACS CNF text. Clauses may span lines; `c` lines are skipped.
pub fn parse_dimacs(text: &str) -> Result<Cnf, SatError> {
    let mut cnf: Option<Cnf> = None;
    let mut expected = 0usize;
    let mut current: Vec<Lit> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        let err = |message: String| SatError::Parse {
            line: line_no,
            message,
        };
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(format!("bad problem line `{t}`")));
            }
            let nv = parts[2]
                .parse()
                .map_err(|_| err(format!("bad variable count `{}`", parts[2])))?;
            expected = parts[3]
                .parse()
                .map_err(|_| err(format!("bad clause count `{}`", parts[3])))?;
            cnf = Some(Cnf::new(nv));
            continue;
        }
        let Some(f) = cnf.as_mut() else {
            return Err(err("clause before problem line".into()));
        };
        for tok in t.split_whitespace() {
            let x: i64 = tok
                .parse()
                .map_err(|_| err(format!("bad literal `{tok}`")))?;
            match Lit::from_dimacs(x) {
                Some(l) => current.push(l),
                None => f
                    .add_clause(std::mem::take(&mut current))
                    .map_err(|e| err(e.to_string()))?,
            }
        }
    }
    let mut cnf = cnf.ok_or(SatError::Parse {
        line: 0,
        message: "missing problem line".into(),
    })?;
    if !current.is_empty() {
        cnf.add_clause(current)?;
    }
    if cnf.len() != expected {
        return Err(SatError::Parse {
            line: 0,
            message: format!("expected {expected} clauses, found {}", cnf.len()),
        });
    }
    Ok(cnf)
}
