//! Exhaustive geodesic oracle. Straight segments are found by unfolding every
//! simple edge-adjacent face sequence (pruned by the visibility cone); the
//! geodesic is the shortest chain of such segments joined at vertices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::complex_core::{glue, GeodesicPath, LinkPoint, Location, PolyComplex2D};
use crate::error::{Error, Result};
use crate::geom::{self, Iso2, P2};

/// A straight leg between two nodes, as crossed edges with their crossing points.
#[derive(Debug, Clone)]
struct Leg {
    to: usize,
    length: f64,
    /// Crossings in order, then the final face.
    crossings: Vec<Location>,
    faces: Vec<usize>,
}

/// Visibility between locations of one complex. Node `k < V` is vertex `k`.
pub struct BruteOracle<'a> {
    c: &'a PolyComplex2D,
    max_faces: usize,
    legs: Vec<Vec<Leg>>,
}

struct Walk<'w> {
    c: &'w PolyComplex2D,
    max_faces: usize,
    origin: P2,
    /// Candidate targets: `(node, location)`.
    targets: &'w [(usize, Location)],
    found: Vec<Leg>,
}

fn rel(tol: f64, x: P2) -> f64 {
    tol * geom::norm(x).max(1.0)
}

impl<'w> Walk<'w> {
    /// Record visible targets in `face` (placed by `m`) within the cone `(r, l)`,
    /// then continue through its other edges.
    fn go(&mut self, face: usize, m: Iso2, cone: Option<(P2, P2)>, path: &mut Vec<(usize, usize, Iso2)>, entered_by: Option<usize>) {
        let c = self.c;
        let inside = |x: P2| match cone {
            None => true,
            Some((r, l)) => {
                let d = geom::sub(x, self.origin);
                geom::cross(r, d) >= -rel(1e-12, d) * geom::norm(r) && geom::cross(d, l) >= -rel(1e-12, d) * geom::norm(l)
            }
        };
        for &(node, loc) in self.targets {
            let Some(q) = c.pos_in_face(&loc, face) else { continue };
            let x = m.apply(q);
            if !inside(x) {
                continue;
            }
            let mut crossings = Vec::new();
            let mut faces = Vec::new();
            let mut ok = true;
            for &(e, f_before, mm) in path.iter() {
                let [a, b] = c.edges[e].ends;
                let (pa, pb) = (mm.apply(c.vertex_pos(f_before, a).unwrap()), mm.apply(c.vertex_pos(f_before, b).unwrap()));
                match geom::ray_line(self.origin, geom::sub(x, self.origin), pa, pb) {
                    Some((s, t)) if (-1e-12..=1.0 + 1e-12).contains(&s) && (-1e-9..=1.0 + 1e-9).contains(&t) => {
                        crossings.push(c.canonical_location(Location::Edge { edge: e, t: t.clamp(0.0, 1.0) * c.edges[e].length }, 1e-12));
                        faces.push(f_before);
                    }
                    _ => ok = false,
                }
            }
            if ok {
                faces.push(face);
                self.found.push(Leg { to: node, length: geom::dist(self.origin, x), crossings, faces });
            }
        }
        if path.len() + 1 >= self.max_faces {
            return;
        }
        for &e in &c.faces[face].edges {
            if Some(e) == entered_by {
                continue;
            }
            let [a, b] = c.edges[e].ends;
            let (pa, pb) = (m.apply(c.vertex_pos(face, a).unwrap()), m.apply(c.vertex_pos(face, b).unwrap()));
            // Portal as seen from the origin: clockwise end first.
            let (da, db) = (geom::sub(pa, self.origin), geom::sub(pb, self.origin));
            let side = geom::cross(da, db);
            if side.abs() <= 1e-14 * (geom::norm(da) * geom::norm(db)).max(1e-300) {
                continue;
            }
            let (pr, pl) = if side > 0.0 { (da, db) } else { (db, da) };
            let next = match cone {
                None => (pr, pl),
                Some((r, l)) => {
                    let nr = if geom::cross(r, pr) > 0.0 { pr } else { r };
                    let nl = if geom::cross(pl, l) > 0.0 { pl } else { l };
                    if geom::cross(nr, nl) < -1e-12 * geom::norm(nr) * geom::norm(nl) {
                        continue;
                    }
                    (nr, nl)
                }
            };
            for &g in &c.edge_faces[e] {
                if g == face || path.iter().any(|&(_, f, _)| f == g) {
                    continue;
                }
                let mg = glue(c, m, face, g, e);
                path.push((e, face, m));
                self.go(g, mg, Some(next), path, Some(e));
                path.pop();
            }
        }
    }
}

/// All straight legs from `from` to the targets.
fn legs_from(c: &PolyComplex2D, max_faces: usize, from: &Location, targets: &[(usize, Location)]) -> Vec<Leg> {
    let mut found = Vec::new();
    for f in c.faces_of(from) {
        let origin = c.pos_in_face(from, f).unwrap();
        let mut w = Walk { c, max_faces, origin, targets, found: Vec::new() };
        // Inside the start face everything is visible.
        w.go(f, Iso2::IDENTITY, None, &mut Vec::new(), None);
        found.extend(w.found);
    }
    found
}

impl<'a> BruteOracle<'a> {
    /// Precompute vertex-to-vertex legs through at most `max_faces` faces.
    pub fn new(c: &'a PolyComplex2D, max_faces: usize) -> Self {
        let targets: Vec<(usize, Location)> = (0..c.vertices.len()).map(|v| (v, Location::Vertex(v))).collect();
        let legs = (0..c.vertices.len())
            .map(|v| legs_from(c, max_faces, &Location::Vertex(v), &targets).into_iter().filter(|l| l.to != v).collect())
            .collect();
        Self { c, max_faces, legs }
    }

    pub fn geodesic(&self, s: &Location, t: &Location) -> Result<GeodesicPath> {
        let c = self.c;
        c.validate_location(s)?;
        c.validate_location(t)?;
        let (s, t) = (c.canonical_location(*s, 1e-12), c.canonical_location(*t, 1e-12));
        if s == t {
            return Ok(GeodesicPath::trivial(s));
        }
        let nv = c.vertices.len();
        // Nodes: vertices, then s (nv) and t (nv + 1) unless they are vertices.
        let node_of = |loc: &Location, extra: usize| if let Location::Vertex(v) = *loc { v } else { extra };
        let (sn, tn) = (node_of(&s, nv), node_of(&t, nv + 1));
        let mut targets: Vec<(usize, Location)> = (0..nv).map(|v| (v, Location::Vertex(v))).collect();
        if tn == nv + 1 {
            targets.push((tn, t));
        }
        let from_s: Vec<Leg> = if sn == nv { legs_from(c, self.max_faces, &s, &targets) } else { Vec::new() };
        let into_t: Vec<(usize, Leg)> = if tn == nv + 1 {
            (0..nv)
                .flat_map(|v| {
                    legs_from(c, self.max_faces, &Location::Vertex(v), &[(tn, t)]).into_iter().map(move |l| (v, l))
                })
                .collect()
        } else {
            Vec::new()
        };
        let n = nv + 2;
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<(usize, Leg)>> = vec![None; n];
        dist[sn] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(Item(0.0, sn));
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == tn {
                break;
            }
            let out: Vec<&Leg> = if u == nv {
                from_s.iter().collect()
            } else if u < nv {
                self.legs[u].iter().chain(into_t.iter().filter(|x| x.0 == u).map(|x| &x.1)).collect()
            } else {
                Vec::new()
            };
            for leg in out {
                let nd = d + leg.length;
                if nd < dist[leg.to] - 1e-15 {
                    dist[leg.to] = nd;
                    pred[leg.to] = Some((u, leg.clone()));
                    heap.push(Item(nd, leg.to));
                }
            }
        }
        if !dist[tn].is_finite() {
            return Err(Error::DepthExceeded(self.max_faces));
        }
        let mut chain = Vec::new();
        let mut at = tn;
        while at != sn {
            let (p, leg) = pred[at].clone().unwrap();
            chain.push(leg);
            at = p;
        }
        chain.reverse();
        let mut path = GeodesicPath::trivial(s);
        for leg in chain {
            let end = if leg.to < nv { Location::Vertex(leg.to) } else { t };
            for (k, loc) in leg.crossings.iter().chain(std::iter::once(&end)).enumerate() {
                let f = leg.faces[k];
                let prev = *path.waypoints.last().unwrap();
                let (a, b) = (c.pos_in_face(&prev, f).unwrap(), c.pos_in_face(loc, f).unwrap());
                if prev == *loc {
                    continue;
                }
                path.length += geom::dist(a, b);
                path.waypoints.push(*loc);
                path.segment_faces.push(f);
            }
        }
        path.length = dist[tn];
        Ok(path)
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// Geodesic between two locations by exhaustive unfolding through at most `max_faces` faces per leg.
pub fn brute_force_geodesic(c: &PolyComplex2D, s: &Location, t: &Location, max_faces: usize) -> Result<GeodesicPath> {
    BruteOracle::new(c, max_faces).geodesic(s, t)
}

/// Smallest link distance, over the vertices a path passes through, between
/// its incoming and outgoing directions. `None` when it meets no vertex.
pub fn min_vertex_angle(c: &PolyComplex2D, path: &GeodesicPath) -> Result<Option<f64>> {
    let mut worst: Option<f64> = None;
    for k in 1..path.waypoints.len().saturating_sub(1) {
        let Location::Vertex(v) = path.waypoints[k] else { continue };
        let dir = |f: usize, other: &Location| -> Option<LinkPoint> {
            let p = c.pos_in_face(other, f)?;
            c.direction(v, f, p)
        };
        let (Some(a), Some(b)) = (dir(path.segment_faces[k - 1], &path.waypoints[k - 1]), dir(path.segment_faces[k], &path.waypoints[k + 1]))
        else {
            continue;
        };
        let g = c.link_graph(v)?;
        let d = g.distance(a, b, 2.0 * PI).unwrap_or(f64::INFINITY);
        worst = Some(worst.map_or(d, |w: f64| w.min(d)));
    }
    Ok(worst)
}
