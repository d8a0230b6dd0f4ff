//! Exact feasibility for systems of linear constraints over nonnegative
//! variables.
//!
//! Equalities are eliminated first by exact Gaussian elimination. The
//! remaining inequalities go into a dictionary with a single auxiliary
//! variable and the phase-one problem is solved with Bland's rule.

use crate::{LpError, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// `Σ coeffs · x  (relation)  rhs`, with sparse coefficients.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Constraint {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    fn dense(&self, n: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); n];
        for (j, c) in &self.coeffs {
            row[*j] = &row[*j] + c;
        }
        row
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self
            .coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| &acc + &(c * &x[*j]));
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Find `x ≥ 0` satisfying every constraint.
#[derive(Clone, Debug, Default)]
pub struct FeasibilityProblem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize) -> FeasibilityProblem {
        FeasibilityProblem {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Constraint) -> Result<(), LpError> {
        if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
            return Err(LpError::VariableOutOfRange {
                index: *j,
                num_vars: self.num_vars,
            });
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

/// Affine expression `constant + Σ coeffs[j] · free[j]` for an eliminated
/// variable.
struct Eliminated {
    var: usize,
    constant: Rational,
    coeffs: Vec<Rational>,
}

/// Returns a feasible point, or `None` when the system is infeasible.
pub fn find_feasible_point(p: &FeasibilityProblem) -> Result<Option<Vec<Rational>>, LpError> {
    let n = p.num_vars;
    let mut eq_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut ineq_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in &p.constraints {
        let row = c.dense(n);
        match c.relation {
            Relation::Eq => eq_rows.push((row, c.rhs.clone())),
            Relation::Ge => ineq_rows.push((row, c.rhs.clone())),
            Relation::Le => ineq_rows.push((row.iter().map(|v| -v).collect(), -&c.rhs)),
        }
    }

    // Gauss-Jordan on the equalities: pivot variables become affine in the rest.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(k) = (r..eq_rows.len()).find(|&k| !eq_rows[k].0[col].is_zero()) else {
            continue;
        };
        eq_rows.swap(r, k);
        let inv = eq_rows[r].0[col].recip();
        let (row, rhs) = &mut eq_rows[r];
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        *rhs = &*rhs * &inv;
        let (pr, prhs) = eq_rows[r].clone();
        for (k, (row, rhs)) in eq_rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in 0..n {
                if !pr[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pr[j]);
                }
            }
            *rhs = &*rhs - &(&f * &prhs);
        }
        pivots.push((r, col));
        r += 1;
    }
    if eq_rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return Ok(None);
    }
    let pivot_cols: Vec<bool> = {
        let mut v = vec![false; n];
        for &(_, c) in &pivots {
            v[c] = true;
        }
        v
    };
    let free: Vec<usize> = (0..n).filter(|&j| !pivot_cols[j]).collect();
    let elim: Vec<Eliminated> = pivots
        .iter()
        .map(|&(row, col)| {
            let (coef, rhs) = &eq_rows[row];
            Eliminated {
                var: col,
                constant: rhs.clone(),
                coeffs: free.iter().map(|&f| -&coef[f]).collect(),
            }
        })
        .collect();

    // Substitute into inequalities; eliminated variables must stay ≥ 0.
    let k = free.len();
    let mut dict_rows: Vec<(Rational, Vec<Rational>)> = Vec::new();
    for (row, rhs) in &ineq_rows {
        let mut constant = -rhs;
        let mut coeffs: Vec<Rational> = free.iter().map(|&f| row[f].clone()).collect();
        for e in &elim {
            let a = &row[e.var];
            if a.is_zero() {
                continue;
            }
            constant = &constant + &(a * &e.constant);
            for (t, c) in coeffs.iter_mut().zip(&e.coeffs) {
                if !c.is_zero() {
                    *t = &*t + &(a * c);
                }
            }
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            if constant.is_negative() {
                return Ok(None);
            }
            continue;
        }
        dict_rows.push((constant, coeffs));
    }
    for e in &elim {
        if e.coeffs.iter().all(|c| c.is_zero()) {
            if e.constant.is_negative() {
                return Ok(None);
            }
            continue;
        }
        dict_rows.push((e.constant.clone(), e.coeffs.clone()));
    }

    let y = match phase_one(k, dict_rows) {
        Some(y) => y,
        None => return Ok(None),
    };
    let mut x = vec![Rational::zero(); n];
    for (t, &f) in free.iter().enumerate() {
        x[f] = y[t].clone();
    }
    for e in &elim {
        let mut v = e.constant.clone();
        for (c, yt) in e.coeffs.iter().zip(&y) {
            if !c.is_zero() && !yt.is_zero() {
                v = &v + &(c * yt);
            }
        }
        x[e.var] = v;
    }
    if !p.is_satisfied(&x) {
        return Err(LpError::Internal("witness fails verification".into()));
    }
    Ok(Some(x))
}

/// Dictionary simplex for: find y ≥ 0 with `const_r + coeffs_r · y ≥ 0` for
/// every row. Variable labels: `0..k` are y, `k` is the auxiliary x0 and
/// `k+1+r` is the slack of row r.
fn phase_one(k: usize, rows: Vec<(Rational, Vec<Rational>)>) -> Option<Vec<Rational>> {
    let m = rows.len();
    if rows.iter().all(|(c, _)| !c.is_negative()) {
        return Some(vec![Rational::zero(); k]);
    }
    let x0 = k;
    let width = k + 1;
    // nonbasic slot s holds variable nonbasic[s]
    let mut nonbasic: Vec<usize> = (0..width).collect();
    let mut basic: Vec<usize> = (0..m).map(|r| k + 1 + r).collect();
    let mut constant: Vec<Rational> = Vec::with_capacity(m);
    let mut coef: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (c, mut a) in rows {
        a.push(Rational::one());
        constant.push(c);
        coef.push(a);
    }
    // objective: maximize -x0
    let mut obj: Vec<Rational> = vec![Rational::zero(); width];
    obj[x0] = Rational::from_int(-1);
    let mut obj_const = Rational::zero();

    let leave = (0..m)
        .min_by(|&a, &b| constant[a].cmp(&constant[b]).then(basic[a].cmp(&basic[b])))
        .unwrap();
    pivot(
        leave, x0, &mut constant, &mut coef, &mut obj, &mut obj_const, &mut basic, &mut nonbasic,
    );

    loop {
        if obj_const.is_zero() {
            break;
        }
        // Bland: smallest label with positive reduced cost
        let entering = (0..width)
            .filter(|&s| obj[s].is_positive())
            .min_by_key(|&s| nonbasic[s]);
        let Some(e) = entering else {
            break;
        };
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..m {
            if !coef[r][e].is_negative() {
                continue;
            }
            let ratio = &constant[r] / &(-&coef[r][e]);
            let better = match &best {
                None => true,
                Some((br, bv)) => ratio < *bv || (ratio == *bv && basic[r] < basic[*br]),
            };
            if better {
                best = Some((r, ratio));
            }
        }
        let (leave, _) = best.expect("phase-one objective is bounded by zero");
        pivot(
            leave, e, &mut constant, &mut coef, &mut obj, &mut obj_const, &mut basic,
            &mut nonbasic,
        );
    }
    if !obj_const.is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); k];
    for r in 0..m {
        if basic[r] < k {
            y[basic[r]] = constant[r].clone();
        }
    }
    Some(y)
}

#[allow(clippy::too_many_arguments)]
fn pivot(
    r: usize,
    e: usize,
    constant: &mut [Rational],
    coef: &mut [Vec<Rational>],
    obj: &mut [Rational],
    obj_const: &mut Rational,
    basic: &mut [usize],
    nonbasic: &mut [usize],
) {
    // row r: b = c + Σ a_j x_j  =>  x_e = (b - c - Σ_{j≠e} a_j x_j) / a_e
    let a_e = coef[r][e].clone();
    let inv = a_e.recip();
    let neg_inv = -&inv;
    constant[r] = &constant[r] * &neg_inv;
    for (j, v) in coef[r].iter_mut().enumerate() {
        if j == e {
            *v = inv.clone();
        } else if !v.is_zero() {
            *v = &*v * &neg_inv;
        }
    }
    let pr = coef[r].clone();
    let pc = constant[r].clone();
    let nz: Vec<usize> = (0..pr.len()).filter(|&j| !pr[j].is_zero()).collect();
    let substitute = |c: &mut Rational, row: &mut [Rational]| {
        let f = row[e].clone();
        if f.is_zero() {
            return;
        }
        *c = &*c + &(&f * &pc);
        for &j in &nz {
            if j == e {
                row[j] = &f * &pr[j];
            } else {
                row[j] = &row[j] + &(&f * &pr[j]);
            }
        }
    };
    for s in 0..constant.len() {
        if s != r {
            substitute(&mut constant[s], &mut coef[s]);
        }
    }
    substitute(obj_const, obj);
    std::mem::swap(&mut basic[r], &mut nonbasic[e]);
}
