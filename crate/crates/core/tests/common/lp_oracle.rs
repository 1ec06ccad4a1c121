//! Exhaustive vertex enumeration for small LPs over exact rationals.

use cat0_core::simplex::{LinearProgram, LpStatus, Relation};
use num::rational::Ratio;
use num::{BigRational, Signed, ToPrimitive, Zero};

/// Small exact rationals; test data keeps determinants far below `i128` range.
type Q = Ratio<i128>;

fn small(v: &BigRational) -> Q {
    Q::new(v.numer().to_i128().unwrap(), v.denom().to_i128().unwrap())
}

pub fn big(v: &Q) -> BigRational {
    BigRational::new((*v.numer()).into(), (*v.denom()).into())
}

/// Halfspaces `g·y ≤ h` equivalent to the LP rows plus `y ≥ 0`.
fn halfspaces(lp: &LinearProgram<BigRational>) -> Vec<(Vec<Q>, Q)> {
    let n = lp.num_vars();
    let mut hs: Vec<(Vec<Q>, Q)> = lp
        .rows
        .iter()
        .map(|r| {
            let g: Vec<Q> = r.coeffs.iter().map(small).collect();
            let h = small(&r.rhs);
            match r.rel {
                Relation::Le => (g, h),
                Relation::Ge => (g.iter().map(|c| -c).collect(), -h),
            }
        })
        .collect();
    for j in 0..n {
        let mut g = vec![Q::zero(); n];
        g[j] = Q::from_integer(-1);
        hs.push((g, Q::zero()));
    }
    hs
}

/// Solve a square system exactly; None when singular.
pub fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                for k in col..n {
                    let d = f * a[col][k];
                    a[r][k] -= d;
                }
                let d = f * b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(k: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for i in start..k {
            if k - i < n - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, n, cur, f);
            cur.pop();
        }
    }
    rec(0, k, n, &mut Vec::new(), f);
}

fn feasible(hs: &[(Vec<Q>, Q)], y: &[Q]) -> bool {
    hs.iter().all(|(g, h)| {
        let lhs: Q = g.iter().zip(y).map(|(a, b)| a * b).sum();
        lhs <= *h
    })
}

/// Best vertex of `{y : hs}` for objective `c`, with the vertex itself.
fn best_vertex(hs: &[(Vec<Q>, Q)], c: &[Q]) -> Option<(Q, Vec<Q>)> {
    let n = c.len();
    let mut best: Option<(Q, Vec<Q>)> = None;
    subsets(hs.len(), n, &mut |idx| {
        let a = idx.iter().map(|&i| hs[i].0.clone()).collect();
        let b = idx.iter().map(|&i| hs[i].1).collect();
        if let Some(y) = solve_square(a, b) {
            if feasible(hs, &y) {
                let v: Q = c.iter().zip(&y).map(|(a, b)| a * b).sum();
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, y));
                }
            }
        }
    });
    best
}

pub struct OracleResult {
    pub status: LpStatus,
    pub objective: Option<BigRational>,
}

/// Status and optimum by enumerating basic feasible solutions. Unboundedness
/// is decided by the normalized recession problem `{g·d ≤ 0, d ≥ 0, Σd = 1}`.
pub fn enumerate(lp: &LinearProgram<BigRational>) -> OracleResult {
    let n = lp.num_vars();
    let hs = halfspaces(lp);
    let c: Vec<Q> = lp.objective.iter().map(small).collect();
    let Some((val, _)) = best_vertex(&hs, &c) else {
        return OracleResult { status: LpStatus::Infeasible, objective: None };
    };
    let one = Q::from_integer(1);
    let mut rec: Vec<(Vec<Q>, Q)> = hs.iter().map(|(g, _)| (g.clone(), Q::zero())).collect();
    rec.push((vec![one; n], one));
    rec.push((vec![-one; n], -one));
    if let Some((dv, _)) = best_vertex(&rec, &c) {
        if dv.is_positive() {
            return OracleResult { status: LpStatus::Unbounded, objective: None };
        }
    }
    OracleResult { status: LpStatus::Optimal, objective: Some(big(&val)) }
}

/// Random small LP with integer data: up to 8 variables and 5 rows.
pub fn random_lp(rng: &mut impl rand::Rng) -> LinearProgram<BigRational> {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=5);
    let q = |v: i64| BigRational::from_integer(v.into());
    let mut lp = LinearProgram::new((0..n).map(|_| q(rng.gen_range(-3..=5))).collect());
    for _ in 0..m {
        let coeffs = (0..n).map(|_| q(rng.gen_range(-4..=4))).collect();
        let rel = if rng.gen_bool(0.7) { Relation::Le } else { Relation::Ge };
        lp.push(coeffs, rel, q(rng.gen_range(-3..=6)));
    }
    lp
}

pub fn to_float(lp: &LinearProgram<BigRational>) -> LinearProgram<f64> {
    let f = |v: &BigRational| v.to_f64().unwrap();
    let mut out = LinearProgram::new(lp.objective.iter().map(f).collect());
    for r in &lp.rows {
        out.push(r.coeffs.iter().map(f).collect(), r.rel, f(&r.rhs));
    }
    out
}
