//! Minimal DIMACS solver front end: `dimacs-solve <file.cnf>`.
//! Prints `s SATISFIABLE` with `v` lines, or `s UNSATISFIABLE`.

use std::process::ExitCode;

use ci_sat::{dimacs, Solver};

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: dimacs-solve <file.cnf>");
        return ExitCode::from(1);
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(1);
        }
    };
    let cnf = match dimacs::parse_dimacs(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let mut solver = Solver::from_cnf(&cnf);
    match solver.solve(&[]) {
        Ok(true) => {
            println!("s SATISFIABLE");
            let vals: Vec<String> = solver
                .model()
                .iter()
                .enumerate()
                .map(|(v, &b)| {
                    let x = v as i64 + 1;
                    if b { x } else { -x }.to_string()
                })
                .collect();
            println!("v {} 0", vals.join(" "));
            ExitCode::from(10)
        }
        Ok(false) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
