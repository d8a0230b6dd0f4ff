use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A literal: a variable with a sign. Encoded as `2 * var + negative`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, negative: bool) -> Lit {
        Lit(var.0 << 1 | negative as u32)
    }

    #[inline]
    pub fn positive(var: usize) -> Lit {
        Lit::new(Var(var as u32), false)
    }

    #[inline]
    pub fn negative(var: usize) -> Lit {
        Lit::new(Var(var as u32), true)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Parses a nonzero DIMACS literal (1-based, sign gives polarity).
    pub fn from_dimacs(x: i64) -> Option<Lit> {
        if x == 0 {
            return None;
        }
        let v = x.unsigned_abs() - 1;
        Some(Lit::new(Var(v as u32), x < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Truth value of the literal under a full assignment.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var().index()] != self.is_negative()
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        for x in [-7i64, -1, 1, 3, 100] {
            assert_eq!(Lit::from_dimacs(x).unwrap().to_dimacs(), x);
        }
        assert!(Lit::from_dimacs(0).is_none());
    }

    #[test]
    fn negation_flips_sign_only() {
        let l = Lit::positive(5);
        assert_eq!((!l).var(), l.var());
        assert!((!l).is_negative());
        assert_eq!(!!l, l);
    }
}
