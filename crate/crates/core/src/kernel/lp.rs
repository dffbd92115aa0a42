//! Exact two-phase simplex method with Bland's anti-cycling rule.
//!
//! [`LinearProgram`] accepts free or non-negative variables and `<=`, `>=`, `=`
//! rows; it is lowered to standard form `max c.x, Ax = b, x >= 0, b >= 0` and
//! solved on a dense rational tableau. [`lp_min_coeff`] is the containment LP
//! used throughout the crate.

use num_traits::{One, Signed, Zero};

use super::matrix::{zero_vec, QVec};
use super::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Set when `status` is `Optimal`.
    pub optimum: Option<Rat>,
    /// Values of the program's variables at the optimum (empty otherwise).
    pub witness: QVec,
}

impl LpResult {
    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            optimum: None,
            witness: Vec::new(),
        }
    }

    fn unbounded() -> Self {
        Self {
            status: LpStatus::Unbounded,
            optimum: None,
            witness: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: QVec,
    rel: Relation,
    rhs: Rat,
}

/// A linear program `max objective.x` over the rationals.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: QVec,
    rows: Vec<Row>,
}

impl LinearProgram {
    /// All variables start non-negative with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            free: vec![false; num_vars],
            objective: zero_vec(num_vars),
            rows: Vec::new(),
        }
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn maximize(&mut self, objective: QVec) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn minimize(&mut self, objective: QVec) -> &mut Self {
        self.maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn constraint(&mut self, coeffs: QVec, rel: Relation, rhs: Rat) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Row { coeffs, rel, rhs });
        self
    }

    /// Solves the program. The reported optimum is the maximum of the objective
    /// (for `minimize`, the negated minimum).
    pub fn solve(&self) -> LpResult {
        // Column layout: for each variable a non-negative part, plus a negative
        // part for free variables, then one slack per inequality row.
        let mut col_of = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &f in &self.free {
            col_of.push((ncols, f.then_some(ncols + 1)));
            ncols += if f { 2 } else { 1 };
        }
        let structural = ncols;
        let slack_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r].rel != Relation::Eq)
            .collect();
        ncols += slack_rows.len();

        let m = self.rows.len();
        let mut a = vec![zero_vec(ncols); m];
        let mut b = zero_vec(m);
        let mut slack = structural;
        for (r, row) in self.rows.iter().enumerate() {
            for (v, c) in row.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (pos, neg) = col_of[v];
                a[r][pos] = c.clone();
                if let Some(neg) = neg {
                    a[r][neg] = -c.clone();
                }
            }
            match row.rel {
                Relation::Le => {
                    a[r][slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    a[r][slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            b[r] = row.rhs.clone();
            if b[r].is_negative() {
                a[r].iter_mut().for_each(|x| *x = -x.clone());
                b[r] = -b[r].clone();
            }
        }
        let mut c = zero_vec(ncols);
        for (v, obj) in self.objective.iter().enumerate() {
            let (pos, neg) = col_of[v];
            c[pos] = obj.clone();
            if let Some(neg) = neg {
                c[neg] = -obj.clone();
            }
        }

        match solve_standard(a, b, &c) {
            Standard::Infeasible => LpResult::infeasible(),
            Standard::Unbounded => LpResult::unbounded(),
            Standard::Optimal { x, value } => {
                let witness = col_of
                    .iter()
                    .map(|&(pos, neg)| match neg {
                        Some(neg) => &x[pos] - &x[neg],
                        None => x[pos].clone(),
                    })
                    .collect();
                LpResult {
                    status: LpStatus::Optimal,
                    optimum: Some(value),
                    witness,
                }
            }
        }
    }
}

enum Standard {
    Infeasible,
    Unbounded,
    Optimal { x: QVec, value: Rat },
}

/// Dense tableau: `rows` hold `[A | b]`, `basis[r]` is the basic column of row r.
struct Tableau {
    rows: Vec<QVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        for x in self.rows[pr].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[pr].clone();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Reduced cost of column `j` for objective `c` (maximization): c_j - c_B B^-1 A_j.
    fn reduced_cost(&self, c: &[Rat], j: usize) -> Rat {
        let mut rc = c[j].clone();
        for (r, &bj) in self.basis.iter().enumerate() {
            let a = &self.rows[r][j];
            if !a.is_zero() && !c[bj].is_zero() {
                rc -= &c[bj] * a;
            }
        }
        rc
    }

    /// Runs primal simplex iterations with Bland's rule over `allowed` columns.
    /// Returns false if unbounded.
    fn optimize(&mut self, c: &[Rat], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols)
                .find(|&j| allowed[j] && !self.basis.contains(&j) && self.reduced_cost(c, j).is_positive());
            let Some(j) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, j);
        }
    }

    fn objective_value(&self, c: &[Rat]) -> Rat {
        self.basis
            .iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (r, &bj)| acc + &c[bj] * self.rhs(r))
    }
}

fn solve_standard(a: Vec<QVec>, b: QVec, c: &[Rat]) -> Standard {
    let m = a.len();
    let n = c.len();
    let total = n + m;
    let mut rows = Vec::with_capacity(m);
    for (r, (mut row, rhs)) in a.into_iter().zip(b).enumerate() {
        row.resize(total, Rat::zero());
        row[n + r] = Rat::one();
        row.push(rhs);
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..total).collect(),
        ncols: total,
    };

    // Phase 1: maximize -(sum of artificials).
    let mut phase1 = zero_vec(total);
    for x in phase1[n..].iter_mut() {
        *x = -Rat::one();
    }
    let all = vec![true; total];
    t.optimize(&phase1, &all);
    if t.objective_value(&phase1).is_negative() {
        return Standard::Infeasible;
    }

    // Drive remaining (zero-valued) artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase2 = c.to_vec();
    phase2.resize(total, Rat::zero());
    let allowed: Vec<bool> = (0..total).map(|j| j < n).collect();
    if !t.optimize(&phase2, &allowed) {
        return Standard::Unbounded;
    }
    let mut x = zero_vec(n);
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rhs(r).clone();
        }
    }
    let value = t.objective_value(&phase2);
    Standard::Optimal { x, value }
}

/// Solves `max eps` subject to `sum l_p p = 0`, `sum l_p = 1`, `l_p >= eps`.
///
/// `Infeasible` iff the origin is outside `conv(points)`; an optimum `> 0` iff
/// it lies in the relative interior; `= 0` iff it lies on the relative boundary.
/// The witness is the coefficient vector `l`.
pub fn lp_min_coeff(points: &[QVec]) -> LpResult {
    let k = points.len();
    if k == 0 {
        return LpResult::infeasible();
    }
    let dim = points[0].len();
    debug_assert!(points.iter().all(|p| p.len() == dim));
    // Variables mu_0..mu_{k-1} >= 0 and eps >= 0 with l_p = mu_p + eps.
    // A phase-1 failure already means 0 is outside the hull (eps = 0, mu = l).
    let mut lp = LinearProgram::new(k + 1);
    for i in 0..dim {
        let mut row: QVec = points.iter().map(|p| p[i].clone()).collect();
        row.push(points.iter().map(|p| p[i].clone()).sum());
        lp.constraint(row, Relation::Eq, Rat::zero());
    }
    let mut sum_row = vec![Rat::one(); k];
    sum_row.push(Rat::from_integer(k.into()));
    lp.constraint(sum_row, Relation::Eq, Rat::one());
    let mut obj = zero_vec(k + 1);
    obj[k] = Rat::one();
    lp.maximize(obj);
    let res = lp.solve();
    match res.status {
        LpStatus::Optimal => {
            let eps = res.witness[k].clone();
            let witness = res.witness[..k].iter().map(|mu| mu + &eps).collect();
            LpResult {
                status: LpStatus::Optimal,
                optimum: Some(eps),
                witness,
            }
        }
        _ => LpResult::infeasible(),
    }
}
