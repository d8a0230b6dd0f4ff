use crate::{Cnf, SatError};

pub const BRUTE_FORCE_MAX_VARS: usize = 24;

/// All satisfying assignments packed as bitmasks (bit `v` = variable `v`),
/// in increasing numeric order.
pub fn brute_force_masks(cnf: &Cnf) -> Result<Vec<u32>, SatError> {
    let n = cnf.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(SatError::TooManyVariables {
            got: n,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    let masks: Vec<(u32, u32)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(p, q), l| {
                let bit = 1u32 << l.var().0;
                if l.is_negative() {
                    (p, q | bit)
                } else {
                    (p | bit, q)
                }
            })
        })
        .collect();
    let mut out = Vec::new();
    for a in 0..(1u64 << n) {
        let a = a as u32;
        if masks.iter().all(|&(p, q)| a & p != 0 || !a & q != 0) {
            out.push(a);
        }
    }
    Ok(out)
}

/// Exhaustive enumeration of satisfying assignments for small formulas.
pub fn brute_force_models(cnf: &Cnf) -> Result<Vec<Vec<bool>>, SatError> {
    let n = cnf.num_vars();
    Ok(brute_force_masks(cnf)?
        .into_iter()
        .map(|a| (0..n).map(|v| a >> v & 1 == 1).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Lit;

    #[test]
    fn empty_formula_over_two_vars() {
        assert_eq!(brute_force_masks(&Cnf::new(2)).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn single_unit() {
        let mut cnf = Cnf::new(1);
        cnf.add_clause(vec![Lit::positive(0)]).unwrap();
        assert_eq!(brute_force_models(&cnf).unwrap(), vec![vec![true]]);
    }

    #[test]
    fn rejects_large() {
        assert!(brute_force_masks(&Cnf::new(25)).is_err());
    }
}
