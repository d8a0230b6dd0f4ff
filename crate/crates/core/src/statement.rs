use std::fmt;
use std::sync::OnceLock;

use crate::ground::{GroundSet, VarSet, MAX_GROUND};
use crate::{CiError, Result};

/// Elementary CI statement `ij|K` with `i < j` and `K ∩ {i,j} = ∅`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Statement {
    pub i: u8,
    pub j: u8,
    pub k: VarSet,
}

impl Statement {
    /// Normalizes the pair order; fails when `i == j` or `K` meets `{i,j}`.
    pub fn new(i: usize, j: usize, k: VarSet) -> Result<Statement> {
        if i == j {
            return Err(CiError::Overlap(format!("pair ({i},{i}) is not a pair")));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if k >> i & 1 == 1 || k >> j & 1 == 1 {
            return Err(CiError::Overlap("conditioning set meets the pair".into()));
        }
        Ok(Statement {
            i: i as u8,
            j: j as u8,
            k,
        })
    }

    /// Unchecked constructor for internal use with known-valid parts.
    #[inline]
    pub(crate) fn raw(i: usize, j: usize, k: VarSet) -> Statement {
        debug_assert!(i != j && k & (1 << i | 1 << j) == 0);
        if i < j {
            Statement { i: i as u8, j: j as u8, k }
        } else {
            Statement { i: j as u8, j: i as u8, k }
        }
    }

    pub fn pair(&self) -> VarSet {
        1 << self.i | 1 << self.j
    }

    /// `ijK` as a variable set.
    pub fn vars(&self) -> VarSet {
        self.pair() | self.k
    }

    /// Position in the canonical enumeration of `sta(N)` for `|N| = n`.
    pub fn index(&self, n: usize) -> usize {
        let (i, j) = (self.i as usize, self.j as usize);
        pair_rank(i, j, n) << (n - 2) | cond_rank(self.k, i, j)
    }

    pub fn display<'a>(&'a self, ground: &'a GroundSet) -> StatementDisplay<'a> {
        StatementDisplay { s: self, ground }
    }

    /// Image under a variable map (`map[v]` = new index of `v`).
    pub fn mapped(&self, map: &[usize]) -> Statement {
        let mut k = 0;
        let mut rest = self.k;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            k |= 1 << map[v];
        }
        Statement::raw(map[self.i as usize], map[self.j as usize], k)
    }
}

/// Number of statements over `n` variables: `C(n,2) · 2^(n-2)`.
pub fn sta_size(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2 << (n - 2)
    }
}

#[inline]
fn pair_rank(i: usize, j: usize, n: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Compresses `k` by deleting bit positions `i < j`.
#[inline]
fn cond_rank(k: VarSet, i: usize, j: usize) -> usize {
    let k = k as usize;
    let low = k & ((1 << i) - 1);
    let mid = (k >> (i + 1)) & ((1 << (j - i - 1)) - 1);
    let high = k >> (j + 1);
    low | mid << i | high << (j - 1)
}

#[inline]
fn cond_unrank(r: usize, i: usize, j: usize) -> VarSet {
    let low = r & ((1 << i) - 1);
    let mid = (r >> i) & ((1 << (j - i - 1)) - 1);
    let high = r >> (j - 1);
    (low | mid << (i + 1) | high << (j + 1)) as VarSet
}

static TABLES: [OnceLock<Vec<Statement>>; MAX_GROUND + 1] = [const { OnceLock::new() }; MAX_GROUND + 1];

/// All statements over `n` variables in canonical index order.
pub fn statements(n: usize) -> &'static [Statement] {
    assert!(n <= MAX_GROUND, "ground size {n} exceeds {MAX_GROUND}");
    TABLES[n].get_or_init(|| {
        let mut v = Vec::with_capacity(sta_size(n));
        for i in 0..n {
            for j in i + 1..n {
                for r in 0..(1usize << n.saturating_sub(2)) {
                    v.push(Statement {
                        i: i as u8,
                        j: j as u8,
                        k: cond_unrank(r, i, j),
                    });
                }
            }
        }
        v
    })
}

/// Statement with canonical index `idx` over `n` variables.
pub fn statement_at(n: usize, idx: usize) -> Result<Statement> {
    statements(n)
        .get(idx)
        .copied()
        .ok_or(CiError::StatementOutOfRange {
            index: idx,
            size: sta_size(n),
        })
}

/// Validated canonical index of `ij|K` over `ground`.
pub fn index_statement(ground: &GroundSet, i: usize, j: usize, k: VarSet) -> Result<usize> {
    let n = ground.len();
    for v in [i, j] {
        if v >= n {
            return Err(CiError::VariableOutOfRange { index: v, n });
        }
    }
    if k & !ground.all() != 0 {
        return Err(CiError::VariableOutOfRange {
            index: (31 - k.leading_zeros()) as usize,
            n,
        });
    }
    Ok(Statement::new(i, j, k)?.index(n))
}

impl GroundSet {
    /// Statement from labels, e.g. `("a", "b", &["c"])`.
    pub fn statement<S: AsRef<str>>(&self, i: &str, j: &str, k: &[S]) -> Result<Statement> {
        let (i, j) = (self.var(i)?, self.var(j)?);
        Statement::new(i, j, self.set_of(k)?)
    }

    /// Parses `a b | c d` (labels) into a statement.
    pub fn parse_statement(&self, text: &str) -> Result<Statement> {
        let (lhs, rhs) = text
            .split_once('|')
            .ok_or_else(|| CiError::parse(0, format!("missing `|` in `{text}`")))?;
        let pair: Vec<&str> = lhs.split_whitespace().collect();
        if pair.len() != 2 {
            return Err(CiError::parse(0, format!("expected two variables before `|` in `{text}`")));
        }
        let cond: Vec<&str> = rhs.split_whitespace().collect();
        let mut k: VarSet = 0;
        for c in &cond {
            let v = self.var(c)?;
            if k >> v & 1 == 1 {
                return Err(CiError::parse(0, format!("repeated variable `{c}`")));
            }
            k |= 1 << v;
        }
        self.statement(pair[0], pair[1], &[] as &[&str])
            .and_then(|s| Statement::new(s.i as usize, s.j as usize, k))
    }
}

pub struct StatementDisplay<'a> {
    s: &'a Statement,
    ground: &'a GroundSet,
}

impl fmt::Display for StatementDisplay<'_> {
    /// Text-format rendering `a b | c d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.ground;
        write!(f, "{} {} |", g.name(self.s.i as usize), g.name(self.s.j as usize))?;
        for l in g.labels_of(self.s.k) {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}
