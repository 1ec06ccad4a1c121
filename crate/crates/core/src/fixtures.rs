//! Example complexes from the convex-hull counterexamples, plus random
//! single-vertex complexes for property tests.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use crate::geom;
use crate::single_vertex::{geodesic, ConePoint, SingleVertexComplex};

/// A cone complex with a named point set and named probe points.
#[derive(Debug, Clone)]
pub struct ConeFixture {
    pub complex: SingleVertexComplex,
    pub points: Vec<(String, ConePoint)>,
    pub probes: Vec<(String, ConePoint)>,
}

impl ConeFixture {
    pub fn point_set(&self) -> Vec<ConePoint> {
        self.points.iter().map(|(_, p)| *p).collect()
    }

    pub fn named(&self, name: &str) -> Option<ConePoint> {
        self.points.iter().chain(&self.probes).find(|(n, _)| n == name).map(|(_, p)| *p)
    }
}

fn cones(table: &[(&str, &str, &str, f64)]) -> Vec<(String, [String; 2], f64)> {
    table.iter().map(|&(id, a, b, ang)| (id.to_string(), [a.to_string(), b.to_string()], ang)).collect()
}

fn strings(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

/// Angles (degrees) of the four-point complex whose hull contains a point
/// that needs a repeated leaf. Axes 2..5 bound a 465° cycle of cells; the
/// points hang off axes 2, 3, 4, 5 in leaf cells.
pub const FIG3_CYCLE_DEG: [(&str, &str, f64); 4] = [("2", "3", 57.0), ("3", "4", 122.0), ("4", "5", 147.0), ("5", "2", 139.0)];
/// `(leaf cell, axis, far ray, point angle from the axis in degrees)`.
pub const FIG3_POINTS_DEG: [(&str, &str, &str, f64); 4] =
    [("c21", "2", "1", 21.0), ("c36", "3", "6", 57.0), ("c47", "4", "7", 23.0), ("c58", "5", "8", 10.0)];

/// Crossing of the geodesic from `a` to `b` with `ray`.
fn crossing_on(c: &SingleVertexComplex, a: &ConePoint, b: &ConePoint, ray: &str) -> ConePoint {
    let r = c.ray_index(ray).unwrap();
    let g = geodesic(c, a, b).unwrap();
    let (_, radius) = *g.crossings.iter().find(|(k, _)| *k == r).expect("geodesic crosses the ray");
    ConePoint::OnRay { ray: r, radius }
}

/// Point of the cone `cone` on the segment from `a` to `b` (both in that cone) at parameter `t`.
fn between(c: &SingleVertexComplex, cone: usize, a: &ConePoint, b: &ConePoint, t: f64) -> ConePoint {
    let pa = a.in_cone(c, cone).unwrap();
    let pb = b.in_cone(c, cone).unwrap();
    ConePoint::from_cone_coords(c, cone, geom::lerp(pa, pb, t))
}

/// Four unit points; `p` lies in the cell between axes 4 and 5 and is built as
/// `a` = σ(p1,p2) ∩ axis 3, `b` = σ(p3,a) ∩ axis 4, `c` = σ(p1,p4) ∩ axis 5,
/// `p` a quarter of the way from `b` to `c`.
pub fn fig3() -> ConeFixture {
    let mut table: Vec<(String, [String; 2], f64)> =
        FIG3_CYCLE_DEG.iter().map(|&(a, b, d)| (format!("c{a}{b}"), [a.to_string(), b.to_string()], d.to_radians())).collect();
    for &(id, axis, far, _) in &FIG3_POINTS_DEG {
        table.push((id.to_string(), [axis.to_string(), far.to_string()], FRAC_PI_2));
    }
    let c = SingleVertexComplex::new(strings(&["1", "2", "3", "4", "5", "6", "7", "8"]), table).unwrap();
    let points: Vec<(String, ConePoint)> = FIG3_POINTS_DEG
        .iter()
        .enumerate()
        .map(|(i, &(id, _, _, deg))| {
            (format!("p{}", i + 1), ConePoint::InCone { cone: c.cone_index(id).unwrap(), angle: deg.to_radians(), radius: 1.0 })
        })
        .collect();
    let [p1, p2, p3, p4] = [points[0].1, points[1].1, points[2].1, points[3].1];
    let a = crossing_on(&c, &p1, &p2, "3");
    let b = crossing_on(&c, &p3, &a, "4");
    let cc = crossing_on(&c, &p1, &p4, "5");
    let p = between(&c, c.cone_index("c45").unwrap(), &b, &cc, 0.25);
    let probes = vec![("a".into(), a), ("b".into(), b), ("c".into(), cc), ("p".into(), p)];
    ConeFixture { complex: c, points, probes }
}

/// Five quadrants: `S1`, `S2`, `S5` share the vertical ray `v`, and `S3`,
/// `S4`, `S5` share the horizontal ray `h`. Point `p_i` lies in `S_i`.
pub fn fig4() -> ConeFixture {
    let c = SingleVertexComplex::new(
        strings(&["v", "h", "a", "b", "c", "d"]),
        cones(&[
            ("S1", "v", "a", FRAC_PI_2),
            ("S2", "v", "b", FRAC_PI_2),
            ("S3", "h", "c", FRAC_PI_2),
            ("S4", "h", "d", FRAC_PI_2),
            ("S5", "h", "v", FRAC_PI_2),
        ]),
    )
    .unwrap();
    let q = |cone: &str, x: f64, y: f64| ConePoint::InQuadrant { cone: c.cone_index(cone).unwrap(), x, y };
    let points = vec![
        ("p1".into(), q("S1", 1.0, 2.0)),
        ("p2".into(), q("S2", 2.0, 3.0)),
        ("p3".into(), q("S3", 1.0, 2.0)),
        ("p4".into(), q("S4", 3.0, 4.0)),
    ];
    let probes = vec![("S5:p".into(), q("S5", 0.8, 0.65))];
    ConeFixture { complex: c, points, probes }
}

/// Three half-planes sharing a line, one point on each page.
pub fn book3() -> ConeFixture {
    let c = SingleVertexComplex::new(
        strings(&["up", "down"]),
        cones(&[("P1", "up", "down", PI), ("P2", "up", "down", PI), ("P3", "up", "down", PI)]),
    )
    .unwrap();
    let pt = |cone: &str, deg: f64, radius: f64| ConePoint::InCone { cone: c.cone_index(cone).unwrap(), angle: deg.to_radians(), radius };
    let points = vec![("p1".into(), pt("P1", 40.0, 1.0)), ("p2".into(), pt("P2", 50.0, 2.0)), ("p3".into(), pt("P3", 60.0, 1.5))];
    ConeFixture { complex: c, points, probes: Vec::new() }
}

/// A random CAT(0) cone complex: a random tree of cones plus up to two extra
/// cones closing cycles, with angles redrawn until every cycle reaches 2π.
pub fn random_cone_complex<R: Rng>(rng: &mut R, max_rays: usize) -> SingleVertexComplex {
    loop {
        let n = rng.gen_range(3..=max_rays.max(3));
        let mut arcs: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        for _ in 0..rng.gen_range(0..=2) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && !arcs.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                arcs.push((a, b));
            }
        }
        let rays: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
        let cones: Vec<(String, [String; 2], f64)> = arcs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| (format!("c{k}"), [rays[a].clone(), rays[b].clone()], rng.gen_range(0.3..PI)))
            .collect();
        if let Ok(c) = SingleVertexComplex::new(rays, cones) {
            return c;
        }
    }
}

/// Random points: mostly inside cones, some on rays.
pub fn random_cone_points<R: Rng>(rng: &mut R, c: &SingleVertexComplex, m: usize) -> Vec<ConePoint> {
    (0..m)
        .map(|_| {
            let k = rng.gen_range(0..c.cones.len());
            let radius = rng.gen_range(0.5..2.0);
            if rng.gen_bool(0.2) {
                ConePoint::OnRay { ray: c.cones[k].rays[rng.gen_range(0..2)], radius }
            } else {
                let a = c.cones[k].angle;
                ConePoint::InCone { cone: k, angle: rng.gen_range(0.02 * a..0.98 * a), radius }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_vertex::{link_distance, LinkDist};

    #[test]
    fn fig3_angle_facts() {
        let f = fig3();
        let c = &f.complex;
        let dir = |n: &str| f.named(n).unwrap().direction(c).unwrap();
        match link_distance(&c.link, dir("p1"), dir("c")) {
            LinkDist::Finite(d) => assert!((d - 160f64.to_radians()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert_eq!(link_distance(&c.link, dir("p1"), dir("b")), LinkDist::AtLeastPi);
        assert_eq!(link_distance(&c.link, dir("p3"), dir("p4")), LinkDist::AtLeastPi);
    }
}
