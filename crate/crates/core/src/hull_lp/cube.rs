//! Exact rows for right-angled complexes. Every point keeps rational
//! quadrant coordinates, and unfolding rotates by quarter turns, so every
//! coefficient is rational.

use log::debug;
use num::{BigRational, Signed, Zero};

use super::{slots, HullRow, RowSource};
use crate::complex_core::{LinkPath, LinkPoint};
use crate::single_vertex::{short_paths, ConePoint, SingleVertexComplex};

type Q2 = [BigRational; 2];

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn axis(k: usize) -> Q2 {
    let (a, b) = match k % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    [BigRational::from_integer(a.into()), BigRational::from_integer(b.into())]
}

fn cross(a: &Q2, b: &Q2) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Quadrant coordinates of a point strictly inside a cone.
fn quadrant_coords(c: &SingleVertexComplex, p: &ConePoint) -> Option<(usize, f64, f64)> {
    match p.direction(c)? {
        LinkPoint::Arc { arc, .. } => match *p {
            ConePoint::InQuadrant { cone, x, y } if cone == arc => Some((arc, x, y)),
            _ => p.in_cone(c, arc).map(|[x, y]| (arc, x, y)),
        },
        LinkPoint::Node(_) => None,
    }
}

/// Coordinates `(along, across)` of a quadrant point relative to one of its cone's rays.
fn relative_to(c: &SingleVertexComplex, cone: usize, ray: usize, x: f64, y: f64) -> (f64, f64) {
    if c.cones[cone].rays[0] == ray {
        (x, y)
    } else {
        (y, x)
    }
}

/// Crossings of the chord between two quadrant points with the rays their
/// link path passes, unfolded with the first crossed ray on the +y axis.
fn unfold_crossings(
    c: &SingleVertexComplex,
    path: &LinkPath,
    p: (usize, f64, f64),
    t: (usize, f64, f64),
) -> Vec<(usize, BigRational)> {
    let nodes: Vec<usize> = path.interior_nodes().into_iter().map(|(n, _)| c.link.nodes[n]).collect();
    let k = nodes.len();
    if k == 0 {
        return Vec::new();
    }
    let (along, across) = relative_to(c, p.0, nodes[0], p.1, p.2);
    let pu: Q2 = [q(across), q(along)];
    let (a, b) = relative_to(c, t.0, nodes[k - 1], t.1, t.2);
    let (ua, ub) = (axis(k), axis(k + 1));
    let tu: Q2 = [&ua[0] * q(a) + &ub[0] * q(b), &ua[1] * q(a) + &ub[1] * q(b)];
    let dir: Q2 = [&tu[0] - &pu[0], &tu[1] - &pu[1]];
    let mut out = Vec::new();
    for (i, &ray) in nodes.iter().enumerate() {
        let u = axis(i + 1);
        let den = cross(&u, &dir);
        if den.is_zero() {
            continue;
        }
        let s = -cross(&u, &pu) / den;
        let hit = [&pu[0] + &s * &dir[0], &pu[1] + &s * &dir[1]];
        let dist = &u[0] * &hit[0] + &u[1] * &hit[1];
        if dist.is_positive() {
            out.push((ray, dist));
        }
    }
    out
}

pub(super) fn cube_rows(c: &SingleVertexComplex, pts: &[ConePoint], support: &[usize]) -> Vec<HullRow<BigRational>> {
    let slot = slots(support);
    let one = BigRational::from_integer(1.into());
    let mut rows = Vec::new();
    let mut inner = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        match p.direction(c) {
            Some(LinkPoint::Node(ray)) => {
                if let Some(&t) = slot.get(&ray) {
                    rows.push(HullRow {
                        target: t,
                        terms: Vec::new(),
                        constant: &one / q(p.radius()),
                        source: RowSource::Point { point: i },
                    });
                }
            }
            Some(LinkPoint::Arc { .. }) => inner.push((i, quadrant_coords(c, p).expect("interior point"))),
            None => {}
        }
    }

    // Quadrant point to ray: a single crossing through an adjacent quadrant,
    // y_ℓ ≤ (h·y_f + 1)/v.
    for &(i, (cone, x, y)) in &inner {
        let dir = pts[i].direction(c).unwrap();
        for (fi, &f) in support.iter().enumerate() {
            for path in short_paths(&c.link, dir, LinkPoint::Node(f)) {
                let nodes = path.interior_nodes();
                if nodes.len() != 1 {
                    if nodes.len() > 1 {
                        debug!("quadrant point path to ray {} crosses {} rays", c.rays[f], nodes.len());
                    }
                    continue;
                }
                let l = c.link.nodes[nodes[0].0];
                let Some(&t) = slot.get(&l) else { continue };
                let (v, h) = relative_to(c, cone, l, x, y);
                let (hq, vq) = (q(h), q(v));
                rows.push(HullRow {
                    target: t,
                    terms: vec![(fi, &hq / &vq)],
                    constant: &one / &vq,
                    source: RowSource::PointRay { point: i, f, h, v },
                });
            }
        }
    }

    for a in 0..inner.len() {
        for b in a + 1..inner.len() {
            let (i, pi) = inner[a];
            let (j, pj) = inner[b];
            let (di, dj) = (pts[i].direction(c).unwrap(), pts[j].direction(c).unwrap());
            for path in short_paths(&c.link, di, dj) {
                for (ray, t) in unfold_crossings(c, &path, pi, pj) {
                    let Some(&s) = slot.get(&ray) else { continue };
                    rows.push(HullRow { target: s, terms: Vec::new(), constant: &one / t, source: RowSource::PointPair { p: i, q: j } });
                }
            }
        }
    }

    // Ray-to-ray chords need a link path of at least π to cross a ray, so
    // they never generate rows here.
    prune(rows)
}

/// Drops rows implied by another row with the same target and variables.
fn prune(mut rows: Vec<HullRow<BigRational>>) -> Vec<HullRow<BigRational>> {
    let vars = |r: &HullRow<BigRational>| r.terms.iter().map(|t| t.0).collect::<Vec<_>>();
    let dominates = |a: &HullRow<BigRational>, b: &HullRow<BigRational>| {
        a.constant <= b.constant && a.terms.iter().zip(&b.terms).all(|(x, y)| x.1 <= y.1)
    };
    rows.sort_by_key(|a| (a.target, vars(a)));
    let mut kept: Vec<HullRow<BigRational>> = Vec::new();
    let mut start = 0;
    for i in 0..rows.len() {
        let row = &rows[i];
        if i > 0 && (rows[i - 1].target, vars(&rows[i - 1])) != (row.target, vars(row)) {
            start = kept.len();
        }
        if kept[start..].iter().any(|k| dominates(k, row)) {
            continue;
        }
        let row = row.clone();
        let mut j = start;
        while j < kept.len() {
            if dominates(&row, &kept[j]) {
                kept.swap_remove(j);
            } else {
                j += 1;
            }
        }
        kept.push(row);
    }
    kept
}
