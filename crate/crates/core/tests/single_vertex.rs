use std::f64::consts::PI;

use cat0_core::complex_core::LinkPoint;
use cat0_core::fixtures::{fig3, fig4, random_cone_complex, random_cone_points};
use cat0_core::geom;
use cat0_core::single_vertex::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Floyd–Warshall over rays: shortest angular distances in the link.
fn ray_distances(c: &SingleVertexComplex) -> Vec<Vec<f64>> {
    let n = c.rays.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for cn in &c.cones {
        let [a, b] = cn.rays;
        d[a][b] = d[a][b].min(cn.angle);
        d[b][a] = d[a][b];
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

/// `(ray, offset)` pairs a direction can start from.
fn anchors(c: &SingleVertexComplex, p: &ConePoint) -> Vec<(usize, f64)> {
    match p.direction(c).unwrap() {
        LinkPoint::Node(r) => vec![(r, 0.0)],
        LinkPoint::Arc { arc, offset } => {
            let cn = &c.cones[arc];
            vec![(cn.rays[0], offset), (cn.rays[1], cn.angle - offset)]
        }
    }
}

fn oracle_angle(c: &SingleVertexComplex, d: &[Vec<f64>], a: &ConePoint, b: &ConePoint) -> f64 {
    let mut best = f64::INFINITY;
    if let (Some(LinkPoint::Arc { arc: x, offset: p }), Some(LinkPoint::Arc { arc: y, offset: q })) = (a.direction(c), b.direction(c)) {
        if x == y {
            best = (p - q).abs();
        }
    }
    for (ra, oa) in anchors(c, a) {
        for (rb, ob) in anchors(c, b) {
            best = best.min(oa + d[ra][rb] + ob);
        }
    }
    best
}

fn oracle_length(c: &SingleVertexComplex, d: &[Vec<f64>], a: &ConePoint, b: &ConePoint) -> f64 {
    let (ra, rb) = (a.radius(), b.radius());
    if a.is_origin() || b.is_origin() {
        return ra + rb;
    }
    let th = oracle_angle(c, d, a, b);
    if th >= PI {
        ra + rb
    } else {
        (ra * ra + rb * rb - 2.0 * ra * rb * th.cos()).max(0.0).sqrt()
    }
}

/// Shortest Euclidean distance between two points sharing a cone.
fn local(c: &SingleVertexComplex, a: &ConePoint, b: &ConePoint) -> Option<f64> {
    (0..c.cones.len())
        .filter_map(|k| Some(geom::norm(geom::sub(a.in_cone(c, k)?, b.in_cone(c, k)?))))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))))
}

#[test]
fn geodesics_match_independent_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let c = random_cone_complex(&mut rng, 10);
        let d = ray_distances(&c);
        let pts = random_cone_points(&mut rng, &c, 6);
        for a in &pts {
            for b in &pts {
                let g = geodesic(&c, a, b).unwrap();
                let want = oracle_length(&c, &d, a, b);
                assert!((g.length - want).abs() < 1e-9, "{} vs {want}", g.length);
                let back = geodesic(&c, b, a).unwrap();
                assert!((g.length - back.length).abs() < 1e-12);
                assert_eq!(g.through_origin, oracle_angle(&c, &d, a, b) >= PI - 1e-9 && a != b);

                // Polyline through the reported crossings has the same length.
                if !g.through_origin {
                    let mut chain = vec![*a];
                    chain.extend(g.crossings.iter().map(|&(ray, radius)| ConePoint::OnRay { ray, radius }));
                    chain.push(*b);
                    let total: f64 = chain.windows(2).map(|w| local(&c, &w[0], &w[1]).unwrap()).sum();
                    assert!((total - g.length).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let c = random_cone_complex(&mut rng, 8);
        let p = random_cone_points(&mut rng, &c, 3);
        let l = |i: usize, j: usize| geodesic(&c, &p[i], &p[j]).unwrap().length;
        assert!(l(0, 2) <= l(0, 1) + l(1, 2) + 1e-9);
    }
}

#[test]
fn origin_in_hull_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let c = random_cone_complex(&mut rng, 10);
        let d = ray_distances(&c);
        let pts = random_cone_points(&mut rng, &c, 4);
        let far = |i: usize, j: usize| oracle_angle(&c, &d, &pts[i], &pts[j]) >= PI;
        let any_far = (0..4).any(|i| (i + 1..4).any(|j| far(i, j)));
        let r = origin_in_hull(&c, &pts);
        match r.witness {
            HullWitness::Pair(i, j) => assert!(r.in_hull && oracle_angle(&c, &d, &pts[i], &pts[j]) >= PI - 1e-9),
            HullWitness::Cycle(ref arcs) => {
                assert!(r.in_hull && !any_far);
                let total: f64 = arcs.iter().map(|&a| c.cones[a].angle).sum();
                assert!(total >= 2.0 * PI - 1e-9);
            }
            HullWitness::None => assert!(!r.in_hull && !any_far),
            HullWitness::OriginInP(i) => assert!(pts[i].is_origin()),
        }
    }
}

#[test]
fn support_contains_crossed_rays() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let c = random_cone_complex(&mut rng, 10);
        let pts = random_cone_points(&mut rng, &c, 4);
        let s = hull_edge_support(&c, &pts);
        for a in &pts {
            for b in &pts {
                for (ray, _) in geodesic(&c, a, b).unwrap().crossings {
                    assert!(s.contains(&ray));
                }
            }
        }
    }
}

#[test]
fn gp_on_fixtures() {
    let f = fig4();
    // Every S1/S2 to S3/S4 pair is at least π apart.
    assert!(matches!(build_gp(&f.complex, &f.point_set()), Err(cat0_core::Error::PairAtLeastPi)));
    let r = origin_in_hull(&f.complex, &f.point_set());
    assert!(r.in_hull && matches!(r.witness, HullWitness::Pair(..)));

    let f = fig3();
    let c = &f.complex;
    let pts = f.point_set();
    let sub = [pts[0], pts[1]];
    let gp = build_gp(c, &sub).unwrap();
    assert!(gp.cycle(&c.link).is_none());
    assert!(!origin_in_hull(c, &sub).in_hull);
}

#[test]
fn validation_rejects_short_cycles() {
    let cones = |a: f64| {
        vec![
            ("x".to_string(), ["a".to_string(), "b".to_string()], a),
            ("y".to_string(), ["b".to_string(), "c".to_string()], a),
            ("z".to_string(), ["c".to_string(), "a".to_string()], a),
        ]
    };
    let rays = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
    assert!(SingleVertexComplex::new(rays(), cones(2.2)).is_ok());
    assert!(matches!(SingleVertexComplex::new(rays(), cones(2.2)).map(|c| c.validate().ok), Ok(true)));
    let short = SingleVertexComplex::build(rays(), cones(2.0 * PI / 3.0 - 0.01)).unwrap();
    assert!(!short.validate().ok);
    assert!(SingleVertexComplex::new(rays(), cones(2.0 * PI / 3.0 - 0.01)).is_err());
}

#[test]
fn chord_crossing_is_symmetric() {
    for (ra, rb, d, phi) in [(1.0, 2.0, 1.0, 0.3), (0.5, 0.5, 2.0, 1.0), (3.0, 1.0, 0.4, 0.1)] {
        let x = chord_crossing(ra, rb, d, phi);
        let y = chord_crossing(rb, ra, d, d - phi);
        assert!((x - y).abs() < 1e-12);
        // Lies on the segment in the plane.
        let a = [ra, 0.0];
        let b = geom::polar(rb, d);
        let p = geom::polar(x, phi);
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        assert!(cross.abs() < 1e-12);
    }
}
