//! Dense two-phase simplex over `f64` or exact rationals.
//!
//! Problems have the form: maximize `c·y` subject to rows `a·y ≤ b` or
//! `a·y ≥ b`, with `y ≥ 0`. Pricing is Dantzig's rule until the pivot count
//! reaches `10·(rows+cols)`, then Bland's rule, which cannot cycle.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arithmetic needed by the tableau. Float comparisons are tolerance aware;
/// rational comparisons are exact.
pub trait Scalar: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Strictly positive beyond tolerance.
    fn is_pos(&self) -> bool;
    /// Strictly negative beyond tolerance.
    fn is_neg(&self) -> bool;
    fn lt(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
    /// True when a pivot of this magnitude is numerically unsafe.
    fn tiny_pivot(&self) -> bool {
        false
    }
    fn is_finite(&self) -> bool {
        true
    }
}

/// Tolerance for float sign tests.
pub const FLOAT_TOL: f64 = 1e-9;
/// Float pivots below this magnitude are rejected.
pub const PIVOT_FLOOR: f64 = 1e-12;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tiny_pivot(&self) -> bool {
        self.abs() < PIVOT_FLOOR
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Build a rational from a small integer fraction.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub rel: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Constraint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Primal point; meaningful only when optimal.
    pub point: Vec<T>,
    pub objective: T,
    pub pivots: usize,
    /// Whether the Bland fallback was engaged.
    pub bland: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, got: usize, expected: usize },
    #[error("non-finite coefficient in float mode")]
    NonFinite,
    #[error("numerical breakdown: pivot magnitude below {PIVOT_FLOOR}")]
    NumericalBreakdown,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(objective: Vec<T>) -> Self {
        Self { objective, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) {
        self.rows.push(Constraint { coeffs, rel, rhs });
    }

    fn check(&self) -> Result<(), SimplexError> {
        let n = self.num_vars();
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(SimplexError::DimensionMismatch { row: i, got: r.coeffs.len(), expected: n });
            }
            if !r.rhs.is_finite() || r.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(SimplexError::NonFinite);
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(SimplexError::NonFinite);
        }
        Ok(())
    }

    /// Plain-text dump: objective line followed by one line per row.
    pub fn dump(&self) -> String {
        let fmt_vec = |v: &[T]| v.iter().map(|c| format!("{}", c.to_f64())).collect::<Vec<_>>().join(" ");
        let mut s = format!("max {}\n", fmt_vec(&self.objective));
        for r in &self.rows {
            let rel = match r.rel {
                Relation::Le => "<=",
                Relation::Ge => ">=",
            };
            s.push_str(&format!("{} {} {}\n", fmt_vec(&r.coeffs), rel, r.rhs.to_f64()));
        }
        s
    }
}

/// Tolerance-aware feasibility check: exact for rationals, 1e-9 for floats.
pub fn check_feasible<T: Scalar>(lp: &LinearProgram<T>, point: &[T]) -> bool {
    if point.len() != lp.num_vars() || point.iter().any(|v| v.is_neg()) {
        return false;
    }
    lp.rows.iter().all(|r| {
        let lhs = dot(&r.coeffs, point);
        let slack = lhs.sub(&r.rhs);
        match r.rel {
            Relation::Le => !slack.is_pos(),
            Relation::Ge => !slack.is_neg(),
        }
    })
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

struct Tableau<T> {
    /// Constraint rows: `ncols` entries followed by the rhs.
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
    bland_after: usize,
    bland: bool,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, i: usize) -> &T {
        &self.a[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.div(&p);
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c] == T::zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v = v.sub(&f.mul(pv));
            }
            row[c] = T::zero();
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut z = cost[j].clone();
        for (i, row) in self.a.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if *cb != T::zero() && row[j] != T::zero() {
                z = z.sub(&cb.mul(&row[j]));
            }
        }
        z
    }

    fn entering(&self, cost: &[T], allowed: &[bool]) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for j in 0..self.ncols {
            if !allowed[j] || self.basis.contains(&j) {
                continue;
            }
            let z = self.reduced_cost(cost, j);
            if !z.is_pos() {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            if best.as_ref().is_none_or(|(_, b)| b.lt(&z)) {
                best = Some((j, z));
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.a.len() {
            let aic = &self.a[i][c];
            if !aic.is_pos() {
                continue;
            }
            let ratio = self.rhs(i).div(aic);
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio.lt(br) || (!br.lt(&ratio) && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn optimize(&mut self, cost: &[T], allowed: &[bool]) -> Outcome {
        loop {
            if self.pivots >= self.bland_after {
                self.bland = true;
            }
            let Some(c) = self.entering(cost, allowed) else {
                return Outcome::Optimal;
            };
            let Some(r) = self.leaving(c) else {
                return Outcome::Unbounded;
            };
            self.pivot(r, c);
        }
    }
}

/// Solve with the default Bland threshold of `10·(rows+cols)` pivots.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, SimplexError> {
    solve_with(lp, None)
}

/// Solve, switching to Bland's rule after `bland_after` pivots (0 = Bland throughout).
pub fn solve_with<T: Scalar>(lp: &LinearProgram<T>, bland_after: Option<usize>) -> Result<LpSolution<T>, SimplexError> {
    lp.check()?;
    let n = lp.num_vars();
    let m = lp.rows.len();

    // Normalize to nonnegative rhs; a `≥ 0` row becomes a `≤ 0` row.
    let rows: Vec<(Vec<T>, Relation, T)> = lp
        .rows
        .iter()
        .map(|r| {
            let flip = r.rhs.is_neg() || (r.rel == Relation::Ge && !r.rhs.is_pos());
            if flip {
                let rel = match r.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                };
                (r.coeffs.iter().map(|c| c.neg()).collect(), rel, r.rhs.neg())
            } else {
                (r.coeffs.clone(), r.rel, r.rhs.clone())
            }
        })
        .collect();
    let n_art = rows.iter().filter(|r| r.1 == Relation::Ge).count();
    let ncols = n + m + n_art;
    let mut a = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = n + m;
    for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![T::zero(); ncols + 1];
        row[..n].clone_from_slice(&coeffs);
        row[ncols] = if rhs.is_neg() || rhs.is_pos() { rhs } else { T::zero() };
        match rel {
            Relation::Le => {
                row[n + i] = T::one();
                basis.push(n + i);
            }
            Relation::Ge => {
                row[n + i] = T::one().neg();
                row[art] = T::one();
                basis.push(art);
                art += 1;
            }
        }
        a.push(row);
    }
    let mut t = Tableau {
        a,
        basis,
        ncols,
        pivots: 0,
        bland_after: bland_after.unwrap_or(10 * (m + ncols)),
        bland: false,
    };
    let is_art = |j: usize| j >= n + m;

    if n_art > 0 {
        let cost1: Vec<T> = (0..ncols).map(|j| if is_art(j) { T::one().neg() } else { T::zero() }).collect();
        let allowed = vec![true; ncols];
        // Phase 1 is bounded below by zero, so it always ends optimal.
        t.optimize(&cost1, &allowed);
        let infeas = (0..t.a.len()).any(|i| is_art(t.basis[i]) && t.rhs(i).is_pos());
        if infeas {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                point: vec![T::zero(); n],
                objective: T::zero(),
                pivots: t.pivots,
                bland: t.bland,
            });
        }
        // Drive remaining zero-level artificials out of the basis.
        let mut i = 0;
        while i < t.a.len() {
            if !is_art(t.basis[i]) {
                i += 1;
                continue;
            }
            let mut col = None;
            let mut best = 0.0f64;
            for j in 0..n + m {
                let v = t.a[i][j].to_f64().abs();
                if t.a[i][j] != T::zero() && !t.a[i][j].tiny_pivot() && v > best {
                    best = v;
                    col = Some(j);
                }
            }
            match col {
                Some(j) if t.a[i][j].is_pos() || t.a[i][j].is_neg() => {
                    t.pivot(i, j);
                    i += 1;
                }
                Some(_) => return Err(SimplexError::NumericalBreakdown),
                None => {
                    if (n..n + m).chain(0..n).any(|j| t.a[i][j] != T::zero()) {
                        return Err(SimplexError::NumericalBreakdown);
                    }
                    t.a.remove(i);
                    t.basis.remove(i);
                }
            }
        }
    }

    let cost2: Vec<T> = (0..ncols).map(|j| if j < n { lp.objective[j].clone() } else { T::zero() }).collect();
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art(j)).collect();
    let outcome = t.optimize(&cost2, &allowed);
    let mut point = vec![T::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rhs(i).clone();
        }
    }
    let status = match outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Unbounded => LpStatus::Unbounded,
    };
    if status == LpStatus::Optimal && !check_feasible(lp, &point) {
        return Err(SimplexError::NumericalBreakdown);
    }
    let objective = dot(&lp.objective, &point);
    Ok(LpSolution { status, point, objective, pivots: t.pivots, bland: t.bland })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_upper_bound() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.push(vec![1.0], Relation::Le, 3.0);
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.point[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_only_is_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.push(vec![1.0], Relation::Ge, 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new(vec![ratio(1, 1)]);
        lp.push(vec![ratio(1, 1)], Relation::Le, ratio(1, 1));
        lp.push(vec![ratio(1, 1)], Relation::Ge, ratio(2, 1));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn rational_two_variable_optimum() {
        let mut lp = LinearProgram::new(vec![ratio(1, 1), ratio(1, 1)]);
        lp.push(vec![ratio(1, 1), ratio(1, 1)], Relation::Le, ratio(1, 1));
        lp.push(vec![ratio(1, 1), ratio(0, 1)], Relation::Le, ratio(2, 5));
        let s = solve(&lp).unwrap();
        assert_eq!(s.objective, ratio(1, 1));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.push(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(SimplexError::DimensionMismatch { .. })));
    }
}
