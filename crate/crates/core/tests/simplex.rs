mod common;

use cat0_core::simplex::{check_feasible, ratio, solve, solve_with, LinearProgram, LpStatus, Relation};
use common::lp_oracle::{enumerate, random_lp, to_float};
use num::{BigRational, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn beale() -> LinearProgram<BigRational> {
    let mut lp = LinearProgram::new(vec![ratio(3, 4), ratio(-20, 1), ratio(1, 2), ratio(-6, 1)]);
    lp.push(vec![ratio(1, 4), ratio(-8, 1), ratio(-1, 1), ratio(9, 1)], Relation::Le, ratio(0, 1));
    lp.push(vec![ratio(1, 2), ratio(-12, 1), ratio(-1, 2), ratio(3, 1)], Relation::Le, ratio(0, 1));
    lp.push(vec![ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1)], Relation::Le, ratio(1, 1));
    lp
}

#[test]
fn beale_cycling_example_terminates() {
    let s = solve(&beale()).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.objective, ratio(5, 4));
    let b = solve_with(&beale(), Some(0)).unwrap();
    assert!(b.bland);
    assert_eq!(b.objective, ratio(5, 4));
}

#[test]
fn two_variable_polygon_vertex() {
    let mut lp = LinearProgram::new(vec![1.0, 1.0]);
    lp.push(vec![1.0, 1.0], Relation::Le, 1.0);
    lp.push(vec![1.0, 0.0], Relation::Le, 0.4);
    let s = solve(&lp).unwrap();
    assert!((s.objective - 1.0).abs() < 1e-12);
}

#[test]
fn feasibility_checker_tolerances() {
    let mut lp = LinearProgram::new(vec![1.0, 1.0]);
    lp.push(vec![1.0, 1.0], Relation::Le, 1.0);
    lp.push(vec![1.0, 0.0], Relation::Le, 0.4);
    assert!(check_feasible(&lp, &[0.0, 0.0]));
    let s = solve(&lp).unwrap();
    assert!(check_feasible(&lp, &s.point));
    let mut bad = s.point.clone();
    bad[1] += 1e-6;
    assert!(!check_feasible(&lp, &bad));
}

#[test]
fn deterministic_pivot_sequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let lp = random_lp(&mut rng);
        assert_eq!(solve(&lp).unwrap(), solve(&lp).unwrap());
    }
}

#[test]
fn random_lps_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let lp = random_lp(&mut rng);
        let oracle = enumerate(&lp);
        let exact = solve(&lp).unwrap();
        assert_eq!(exact.status, oracle.status, "{}", lp.dump());
        let float = solve(&to_float(&lp)).unwrap();
        assert_eq!(float.status, oracle.status);
        if let Some(v) = oracle.objective {
            assert_eq!(exact.objective, v);
            assert!(check_feasible(&lp, &exact.point));
            assert!((float.objective - v.to_f64().unwrap()).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weak_duality(seed in any::<u64>(), pts in prop::collection::vec(prop::collection::vec(0.0f64..3.0, 8), 20)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = to_float(&random_lp(&mut rng));
        let s = solve(&lp).unwrap();
        if s.status == LpStatus::Optimal {
            for p in pts {
                let p = &p[..lp.num_vars()];
                if check_feasible(&lp, p) {
                    let v: f64 = lp.objective.iter().zip(p).map(|(a, b)| a * b).sum();
                    prop_assert!(v <= s.objective + 1e-9);
                }
            }
        }
    }
}
