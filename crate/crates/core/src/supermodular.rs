//! Set functions on the power set of a ground set, their difference
//! expressions, and exact feasibility queries over the supermodular cone.

use std::fmt::Write as _;
use std::sync::Arc;

use ci_lp::{find_feasible_point, Constraint, FeasibilityProblem, Rational, Relation};

use crate::bitset::BitSet;
use crate::ground::{GroundSet, VarSet};
use crate::model::CIModel;
use crate::statement::{sta_size, statements, Statement};
use crate::{CiError, Result};

/// Largest ground set accepted by cone queries.
pub const LP_MAX_GROUND: usize = 8;

/// `m : P(N) → Q`, stored by subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    ground: Arc<GroundSet>,
    values: Vec<Rational>,
}

impl SetFunction {
    /// The zero function.
    pub fn new(ground: Arc<GroundSet>) -> SetFunction {
        let values = vec![Rational::zero(); 1 << ground.len()];
        SetFunction { ground, values }
    }

    pub fn from_fn(ground: Arc<GroundSet>, f: impl Fn(VarSet) -> Rational) -> SetFunction {
        let values = (0..1u32 << ground.len()).map(f).collect();
        SetFunction { ground, values }
    }

    /// Values for all `2^n` subsets, indexed by mask.
    pub fn from_values(ground: Arc<GroundSet>, values: Vec<Rational>) -> Result<SetFunction> {
        if values.len() != 1 << ground.len() {
            return Err(CiError::Unsupported(format!(
                "expected {} subset values, got {}",
                1usize << ground.len(),
                values.len()
            )));
        }
        Ok(SetFunction { ground, values })
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, s: VarSet) -> &Rational {
        &self.values[s as usize]
    }

    pub fn set(&mut self, s: VarSet, v: Rational) {
        self.values[s as usize] = v;
    }

    /// `m(ijK) + m(K) − m(iK) − m(jK)`.
    pub fn delta(&self, s: &Statement) -> Rational {
        let (i, j, k) = (1 << s.i, 1 << s.j, s.k);
        self.get(i | j | k) + self.get(k) - self.get(i | k) - self.get(j | k)
    }

    /// First statement with a negative difference, if any.
    pub fn violation(&self) -> Option<Statement> {
        statements(self.ground.len())
            .iter()
            .copied()
            .find(|s| self.delta(s).is_negative())
    }

    pub fn is_supermodular(&self) -> bool {
        self.violation().is_none()
    }

    /// Statements with vanishing difference.
    pub fn induced_model(&self) -> Result<CIModel> {
        if let Some(s) = self.violation() {
            return Err(CiError::NotSupermodular(format!(
                "difference at {} is {}",
                s.display(&self.ground),
                self.delta(&s)
            )));
        }
        let n = self.ground.len();
        let bits = BitSet::from_indices(
            sta_size(n),
            statements(n)
                .iter()
                .enumerate()
                .filter(|(_, s)| self.delta(s).is_zero())
                .map(|(t, _)| t),
        );
        CIModel::from_bits(self.ground.clone(), bits)
    }

    /// `set` lines for every nonzero value, ordered by mask.
    pub fn to_text(&self) -> String {
        let mut s = format!("ground: {}\n", self.ground);
        self.write_body(&mut s);
        s
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        for (mask, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let labels = if mask == 0 {
                "-".to_string()
            } else {
                self.ground.labels_of(mask as VarSet).join(",")
            };
            writeln!(out, "set {labels} value {v}").unwrap();
        }
    }

    pub fn parse(text: &str) -> Result<SetFunction> {
        let mut ground = None;
        let mut body = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if ground.is_none() {
                let rest = line
                    .strip_prefix("ground:")
                    .ok_or_else(|| CiError::parse(no + 1, "expected `ground:` header"))?;
                ground = Some(Arc::new(
                    GroundSet::new(rest.split_whitespace()).map_err(|e| CiError::parse(no + 1, e.to_string()))?,
                ));
            } else {
                body.push((no + 1, line));
            }
        }
        let g = ground.ok_or_else(|| CiError::parse(0, "missing `ground:` header"))?;
        SetFunction::parse_lines(g, body)
    }

    /// Parses `set <labels-or-dash> value <p/q>` lines; unlisted subsets are 0.
    pub(crate) fn parse_lines<'a>(
        ground: Arc<GroundSet>,
        lines: impl IntoIterator<Item = (usize, &'a str)>,
    ) -> Result<SetFunction> {
        let mut f = SetFunction::new(ground);
        let mut seen = vec![false; f.values.len()];
        for (no, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let (set_txt, val_txt) = match toks.as_slice() {
                ["set", s, "value", v] => (*s, *v),
                ["set", "value", v] => ("-", *v),
                _ => return Err(CiError::parse(no, format!("expected `set <labels> value <p/q>`, got `{line}`"))),
            };
            let mask = f.ground.parse_set(set_txt).map_err(|e| CiError::parse(no, e.to_string()))?;
            let v: Rational = val_txt
                .parse()
                .map_err(|_| CiError::parse(no, format!("bad rational `{val_txt}`")))?;
            if std::mem::replace(&mut seen[mask as usize], true) {
                return Err(CiError::parse(no, format!("subset `{set_txt}` listed twice")));
            }
            f.values[mask as usize] = v;
        }
        Ok(f)
    }
}

/// Variables of a cone query: `m(S)` for `|S| ≥ 2`; the rest are pinned to 0.
struct ConeVars {
    var_of: Vec<Option<usize>>,
    count: usize,
}

impl ConeVars {
    fn new(n: usize) -> ConeVars {
        let mut var_of = vec![None; 1 << n];
        let mut count = 0;
        for (mask, v) in var_of.iter_mut().enumerate() {
            if mask.count_ones() >= 2 {
                *v = Some(count);
                count += 1;
            }
        }
        ConeVars { var_of, count }
    }

    fn delta_row(&self, s: &Statement) -> Vec<(usize, Rational)> {
        let (i, j, k) = (1u32 << s.i, 1u32 << s.j, s.k);
        let terms = [(i | j | k, 1), (k, 1), (i | k, -1), (j | k, -1)];
        let mut row: Vec<(usize, Rational)> = Vec::with_capacity(4);
        for (mask, c) in terms {
            if let Some(v) = self.var_of[mask as usize] {
                row.push((v, Rational::from_int(c)));
            }
        }
        row
    }
}

fn check_lp_size(n: usize) -> Result<()> {
    if n > LP_MAX_GROUND {
        return Err(CiError::Unsupported(format!(
            "supermodular cone queries are limited to {LP_MAX_GROUND} variables (got {n})"
        )));
    }
    Ok(())
}

/// Finds a standardized supermodular `m` over `n` variables with `Δm = 0`
/// on `zero`, `Δm ≥ c` on every statement of `targets`, and `Δm ≥ 0`
/// elsewhere. Returns all `2^n` values.
pub fn supermodular_witness(n: usize, zero: &BitSet, targets: &BitSet, c: &Rational) -> Result<Option<Vec<Rational>>> {
    check_lp_size(n)?;
    if !c.is_positive() {
        return Err(CiError::Unsupported("target bound must be positive".into()));
    }
    if !zero.is_disjoint(targets) {
        return Ok(None);
    }
    let vars = ConeVars::new(n);
    let mut p = FeasibilityProblem::new(vars.count);
    for (t, s) in statements(n).iter().enumerate() {
        let row = vars.delta_row(s);
        let (rel, rhs) = if zero.contains(t) {
            (Relation::Eq, Rational::zero())
        } else if targets.contains(t) {
            (Relation::Ge, c.clone())
        } else {
            (Relation::Ge, Rational::zero())
        };
        p.push(Constraint::new(row, rel, rhs))?;
    }
    let Some(x) = find_feasible_point(&p)? else {
        return Ok(None);
    };
    let values = vars
        .var_of
        .iter()
        .map(|v| v.map_or_else(Rational::zero, |v| x[v].clone()))
        .collect();
    Ok(Some(values))
}

/// Statements whose difference is strictly positive in a witness.
pub(crate) fn positive_deltas(n: usize, values: &[Rational]) -> BitSet {
    BitSet::from_indices(
        sta_size(n),
        statements(n).iter().enumerate().filter_map(|(t, s)| {
            let (i, j, k) = (1usize << s.i, 1usize << s.j, s.k as usize);
            let d = &values[i | j | k] + &values[k] - &values[i | k] - &values[j | k];
            d.is_positive().then_some(t)
        }),
    )
}

/// Is there a supermodular function vanishing on `zero` with `Δ(target) ≥ 1`?
pub fn supermodular_feasible(zero: &CIModel, target: &Statement) -> Result<bool> {
    let n = zero.n();
    let t = target.index(n);
    let targets = BitSet::from_indices(sta_size(n), [t]);
    Ok(supermodular_witness(n, zero.bits(), &targets, &Rational::one())?.is_some())
}
