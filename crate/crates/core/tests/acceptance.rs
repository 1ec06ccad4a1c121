//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cat0_core::complex_core::{validate_cat0, Location, PolyComplex2D};
use cat0_core::fixtures::{fig3, fig4, random_cone_complex, random_cone_points};
use cat0_core::hull_lp::*;
use cat0_core::io::{generate, Space};
use cat0_core::simplex::{check_feasible, ratio, solve, LinearProgram, Relation};
use cat0_core::single_vertex::{geodesic, link_distance, ConePoint, LinkDist};
use cat0_core::spm::brute::BruteOracle;
use cat0_core::spm::fixtures::*;
use cat0_core::spm::*;
use common::lp_oracle::{enumerate, random_lp, to_float};
use num::{BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let b = generate("t5").unwrap();
    let Space::Cone(c) = &b.space else { return (false, "t5 is not a cone complex".into()) };
    let g = &c.link;
    let regular = (0..g.nodes.len()).all(|n| g.degree(n) == 3);
    let girth = g.shortest_cycle().map(|x| x.length).unwrap_or(f64::INFINITY);
    let ok_cat0 = c.validate().ok;
    let secs = t.elapsed().as_secs_f64();
    let pass = g.nodes.len() == 10 && g.arcs.len() == 15 && regular && (girth - 2.5 * PI).abs() < 1e-9 && ok_cat0 && secs < 1.0;
    (pass, format!("nodes {} arcs {} 3-regular {regular} girth {:.12}π cat0 {ok_cat0} in {secs:.3}s", g.nodes.len(), g.arcs.len(), girth / PI))
}

fn criterion_2() -> Outcome {
    let f = fig3();
    let c = &f.complex;
    let (p1, b, cc) = (f.named("p1").unwrap(), f.named("b").unwrap(), f.named("c").unwrap());
    let dir = |p: &ConePoint| p.direction(c).unwrap();
    let d_c = link_distance(&c.link, dir(&p1), dir(&cc));
    let d_b = link_distance(&c.link, dir(&p1), dir(&b));
    let g = geodesic(c, &p1, &b).unwrap();
    let to_c = matches!(d_c, LinkDist::Finite(d) if (d - 160f64.to_radians()).abs() <= 1e-9);
    let exact = g.length == p1.radius() + b.radius();
    let pass = to_c && d_b == LinkDist::AtLeastPi && g.through_origin && exact;
    (pass, format!("d(p1,c) = {d_c:?}, d(p1,b) = {d_b:?}, through origin {} length {} = r_a + r_b: {exact}", g.through_origin, g.length))
}

/// Chord from `x_e` on the x-axis to `x_f` at angle `γ1 + γ2`, met with the ray at angle `γ1`.
fn planar_crossing(x_e: f64, x_f: f64, g1: f64, g2: f64) -> f64 {
    let a = [x_e, 0.0];
    let b = [x_f * (g1 + g2).cos(), x_f * (g1 + g2).sin()];
    let d = [g1.cos(), g1.sin()];
    // Solve a + s (b − a) = t d.
    let m = [[b[0] - a[0], -d[0]], [b[1] - a[1], -d[1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (m[0][0] * -a[1] - m[1][0] * -a[0]) / det
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (x_e, x_f) = (rng.gen_range(0.05..10.0), rng.gen_range(0.05..10.0));
        let total = rng.gen_range(0.02..PI - 0.02);
        let g1 = rng.gen_range(0.01..0.99) * total;
        let g2 = total - g1;
        let f = crossing_formula(x_e, x_f, g1, g2).unwrap();
        let p = planar_crossing(x_e, x_f, g1, g2);
        worst = worst.max((f - p).abs() / p.abs());
    }
    let secs = t0.elapsed().as_secs_f64();
    (worst <= 1e-12 && secs < 1.0, format!("1000 samples, worst relative error {worst:.2e}, {secs:.3}s"))
}

fn matches_oracle(h: &HullResult, o: &OracleResult, tol: f64) -> Result<f64, String> {
    if h.origin_in_hull != o.origin_in_hull {
        return Err("origin membership differs".into());
    }
    let mut worst: f64 = 0.0;
    for x in &h.crossings {
        let y = o.crossing(&x.ray).ok_or_else(|| format!("oracle misses ray {}", x.ray))?;
        let e = (x.x_max - y.x_max).abs().max((x.x_min - y.x_min).abs());
        if e > tol {
            return Err(format!("ray {} off by {e:.2e}", x.ray));
        }
        worst = worst.max(e);
    }
    Ok(worst)
}

fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases: Vec<(String, cat0_core::single_vertex::SingleVertexComplex, Vec<ConePoint>)> = Vec::new();
    for (name, f) in [("fig4", fig4()), ("fig3", fig3())] {
        cases.push((name.into(), f.complex.clone(), f.point_set()));
    }
    for i in 0..100 {
        let c = random_cone_complex(&mut rng, 20);
        let m = rng.gen_range(1..=10);
        let p = random_cone_points(&mut rng, &c, m);
        cases.push((format!("random {i}"), c, p));
    }
    let (mut compared, mut skipped, mut worst) = (0, 0, 0.0f64);
    for (name, c, p) in &cases {
        let o = iterative_hull_oracle(c, p, 1e-10, 1000);
        if !o.converged {
            skipped += 1;
            continue;
        }
        let h = solve_hull(c, p).unwrap();
        match matches_oracle(&h, &o, 1e-6) {
            Ok(w) => worst = worst.max(w),
            Err(e) => return (false, format!("{name}: {e}")),
        }
        compared += 1;
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = secs < 30.0 && compared > 0;
    (pass, format!("{compared} compared, {skipped} without oracle convergence, worst {worst:.2e}, {secs:.2}s"))
}

fn criterion_5() -> Outcome {
    let f = fig4();
    let p = f.point_set();
    let support: Vec<usize> = cat0_core::single_vertex::hull_edge_support(&f.complex, &p).into_iter().collect();
    let lp = build_lp_cube(&f.complex, &p, &support, false);
    let one = BigRational::from_integer(1.into());
    let mut point_ray = 0;
    for row in &lp.rows {
        let ok = match row.source {
            RowSource::PointRay { h, v, .. } => {
                point_ray += 1;
                let (h, v) = (BigRational::from_float(h).unwrap(), BigRational::from_float(v).unwrap());
                row.terms.len() == 1 && row.terms[0].1 == &h / &v && row.constant == &one / &v
            }
            RowSource::Point { point } => row.terms.is_empty() && row.constant == &one / BigRational::from_float(p[point].radius()).unwrap(),
            // h = 0: the bound 1/t from a chord between two quadrant points.
            RowSource::PointPair { p: i, q: j } => {
                let t = 1.0 / row.constant.to_f64().unwrap();
                let g = geodesic(&f.complex, &p[i], &p[j]).unwrap();
                row.terms.is_empty() && g.crossings.iter().any(|&(_, x)| (x - t).abs() < 1e-12)
            }
            _ => false,
        };
        if !ok {
            return (false, format!("row {:?} is not of the form (h·y_f + 1)/v", row.source));
        }
    }
    let exact = solve_hull_with(&f.complex, &p, HullOptions { arith: Some(Arith::Rational), ..Default::default() }).unwrap();
    let float = solve_hull_with(&f.complex, &p, HullOptions { arith: Some(Arith::Float), ..Default::default() }).unwrap();
    let mut worst: f64 = 0.0;
    for x in &exact.crossings {
        worst = worst.max((x.x_max - float.crossing(&x.ray).unwrap().x_max).abs());
    }
    (point_ray > 0 && worst <= 1e-9, format!("{} rows, {point_ray} point-ray rows exact; rational vs float {worst:.2e}", lp.rows.len()))
}

fn criterion_6() -> Outcome {
    let f = fig4();
    let c = &f.complex;
    let p = f.point_set();
    let probe = f.named("S5:p").unwrap();
    let s5 = c.cone_index("S5").unwrap();
    let h = solve_hull(c, &p).unwrap();
    let strictly_inside = matches!(probe, ConePoint::InQuadrant { cone, x, y } if cone == s5 && x > 0.0 && y > 0.0);
    let in_hull = h.contains(c, &probe) && !h.on_boundary(c, &probe);
    let mut enters = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let g = geodesic(c, &p[i], &p[j]).unwrap();
            if let Some(path) = g.link_path {
                enters |= path.hops.iter().any(|hop| hop.arc == s5 && hop.len > 0.0);
            }
        }
    }
    let a = strictly_inside && in_hull && !enters;
    let full = membership(c, &p, &probe).unwrap();
    let subsets = (0..4).filter(|&skip| {
        let sub: Vec<ConePoint> = (0..4).filter(|&k| k != skip).map(|k| p[k]).collect();
        membership(c, &sub, &probe).unwrap()
    });
    let b = full && subsets.count() == 0;
    let f3 = fig3();
    let q = f3.named("p").unwrap();
    let cc = membership(&f3.complex, &f3.point_set(), &q).unwrap();
    (a && b && cc, format!("(a) interior point in hull {in_hull}, pairwise geodesic enters S5 {enters}; (b) Caratheodory failure {b}; (c) fig3 p in hull {cc}"))
}

fn criterion_7() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for n in 1..=8 {
        let t0 = Instant::now();
        let f = gen_exponential_complex(n);
        let spm = build_spm(&f.complex, &f.source, DEFAULT_REGION_CAP).unwrap();
        let rep = branch_counts(&spm);
        let secs = t0.elapsed().as_secs_f64();
        let v = rep.trees.iter().find(|t| t.vertex == "v").map_or(0, |t| t.branches);
        pass &= v == 1 << n;
        if n == 8 {
            pass &= secs < 10.0;
            detail.push(format!("n=8 in {secs:.2}s with {} regions", spm.region_count()));
        }
        detail.insert(n - 1, format!("{v}"));
    }
    (pass, format!("branches for n=1..8: {}", detail.join(" ")))
}

fn samples(c: &PolyComplex2D) -> Vec<Location> {
    let mut out = Vec::new();
    for (f, face) in c.faces.iter().enumerate() {
        for i in 1..=5 {
            for j in 1..=5 {
                let (a, b) = (i as f64 / 7.0, j as f64 / 7.0 * (1.0 - i as f64 / 7.0));
                let [p0, p1, p2] = face.coords;
                let w = 1.0 - a - b;
                out.push(Location::Face { face: f, p: [w * p0[0] + a * p1[0] + b * p2[0], w * p0[1] + a * p1[1] + b * p2[1]] });
            }
        }
    }
    out
}

fn check_fixture(name: &str, f: &SpmFixture) -> Result<(usize, f64), String> {
    let spm = build_spm(&f.complex, &f.source, DEFAULT_REGION_CAP).map_err(|e| format!("{name}: {e}"))?;
    let lem = verify_entry_lemmas(&spm);
    if !lem.ok {
        return Err(format!("{name}: {:?}", lem.violations));
    }
    let lsm = derive_last_step(&spm);
    let c = &f.complex;
    let oracle = BruteOracle::new(c, c.faces.len() + 1);
    let mut worst: f64 = 0.0;
    let targets = samples(c);
    for t in &targets {
        let q = query_path(&lsm, &lsm.locate(t).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        let b = oracle.geodesic(&f.source, t).map_err(|e| format!("{name}: {e}"))?;
        let e = (q.length - b.length).abs();
        if e > 1e-9 {
            return Err(format!("{name}: {t:?} query {} oracle {}", q.length, b.length));
        }
        worst = worst.max(e);
    }
    Ok((targets.len(), worst))
}

fn criterion_8() -> Outcome {
    let mut fixtures: Vec<(String, SpmFixture)> = vec![
        ("single triangle".into(), single_triangle()),
        ("flat square".into(), flat_square()),
        ("two faces".into(), two_faces()),
        ("L shape".into(), l_shape()),
        ("corridor".into(), corridor(4)),
        ("book".into(), triangle_book(4)),
        ("flower".into(), flower(9)),
        ("incoming cycle".into(), gen_incoming_cycle()),
    ];
    fixtures.extend((1..=4).map(|n| (format!("exponential {n}"), gen_exponential_complex(n))));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    fixtures.extend((0..50).map(|i| (format!("random {i}"), random_cat0(&mut rng, 10))));
    let (mut targets, mut worst) = (0, 0.0f64);
    for (name, f) in &fixtures {
        match check_fixture(name, f) {
            Ok((n, w)) => {
                targets += n;
                worst = worst.max(w);
            }
            Err(e) => return (false, e),
        }
    }
    (true, format!("{} complexes, {targets} targets, worst {worst:.2e}, entry lemmas hold", fixtures.len()))
}

fn manifold_grid(rng: &mut ChaCha8Rng, faces: usize) -> SpmFixture {
    let (m, n) = match faces {
        10 => (1, 5),
        20 => (2, 5),
        40 => (4, 5),
        _ => (4, faces / 8),
    };
    loop {
        let saddle = rng.gen_range(0.0..0.6);
        let c = random_grid(rng, m, n, 0.25, saddle);
        if validate_cat0(&c).ok && c.is_manifold() {
            let v = rng.gen_range(0..c.vertices.len());
            return SpmFixture { complex: c, source: Location::Vertex(v) };
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pass = true;
    let mut notes = Vec::new();
    let mut counts = Vec::new();
    for n in [10usize, 20, 40, 80] {
        let mut most = 0;
        for _ in 0..5 {
            let f = manifold_grid(&mut rng, n);
            let spm = build_spm(&f.complex, &f.source, DEFAULT_REGION_CAP).unwrap();
            let rep = branch_counts(&spm);
            if !rep.trees.iter().all(|t| t.branches == 1 && t.reentries == 0) {
                pass = false;
                notes.push(format!("manifold n={n} has a branching tree"));
            }
            most = most.max(spm.region_count());
        }
        counts.push((n as f64, most as f64));
    }
    for k in 2..=20 {
        let f = random_square_tree(&mut rng, k);
        let spm = build_spm(&f.complex, &f.source, DEFAULT_REGION_CAP).unwrap();
        if branch_counts(&spm).trees.iter().any(|t| t.repeated_faces > 0) {
            pass = false;
            notes.push(format!("square tree of {k} enters a face twice"));
        }
    }
    let c_fit = counts.iter().map(|&(n, r)| r / (n * n)).fold(0.0, f64::max);
    let (lx, ly): (Vec<f64>, Vec<f64>) = counts.iter().map(|&(n, r)| (n.ln(), r.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / 4.0, ly.iter().sum::<f64>() / 4.0);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    pass &= slope <= 2.25;
    let table: Vec<String> = counts.iter().map(|(n, r)| format!("n={n}: {r}")).collect();
    (pass, format!("regions {}; C = {c_fit:.3}, log-log slope {slope:.2}{}", table.join(", "), if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut optimal, mut bland) = (0, 0);
    for i in 0..1000 {
        let lp = random_lp(&mut rng);
        let oracle = enumerate(&lp);
        let exact = solve(&lp).unwrap();
        let float = solve(&to_float(&lp)).unwrap();
        bland += exact.bland as usize;
        if exact.status != oracle.status || float.status != oracle.status {
            return (false, format!("instance {i}: status {:?}/{:?} vs {:?}", exact.status, float.status, oracle.status));
        }
        if let Some(v) = oracle.objective {
            optimal += 1;
            if exact.objective != v || !check_feasible(&lp, &exact.point) || (float.objective - v.to_f64().unwrap()).abs() > 1e-9 {
                return (false, format!("instance {i}: objective mismatch"));
            }
        }
    }
    // Beale's example cycles under the textbook Dantzig rule.
    let mut lp = LinearProgram::new(vec![ratio(3, 4), ratio(-20, 1), ratio(1, 2), ratio(-6, 1)]);
    lp.push(vec![ratio(1, 4), ratio(-8, 1), ratio(-1, 1), ratio(9, 1)], Relation::Le, ratio(0, 1));
    lp.push(vec![ratio(1, 2), ratio(-12, 1), ratio(-1, 2), ratio(3, 1)], Relation::Le, ratio(0, 1));
    lp.push(vec![ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1)], Relation::Le, ratio(1, 1));
    let beale = solve(&lp).unwrap();
    let ok = beale.objective == ratio(5, 4);
    (ok, format!("1000 LPs, {optimal} optimal, Bland fallback in {bland}; cycling example optimum 5/4 {ok} (Bland {})", beale.bland))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("T5 structure", criterion_1),
        ("link classification", criterion_2),
        ("sine-law crossing", criterion_3),
        ("LP vs iterative oracle", criterion_4),
        ("cube rational path", criterion_5),
        ("counterexamples", criterion_6),
        ("exponential SPM", criterion_7),
        ("last-step correctness", criterion_8),
        ("size properties", criterion_9),
        ("simplex backend", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        println!("criterion {:>2} {}: {name}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
