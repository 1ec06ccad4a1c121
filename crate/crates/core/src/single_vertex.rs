//! Cone complexes with one vertex `O`. Geodesics either pass through `O` or
//! unfold along a link path shorter than π.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::complex_core::{Cat0Report, Cat0Violation, LinkArc, LinkGraph, LinkPath, LinkPoint, TOL};
use crate::error::{Error, Result};
use crate::geom::{self, P2};

/// Link distances within this much of π count as "at least π".
pub const PI_GUARD: f64 = 1e-9;
/// Cap on tied link paths enumerated per pair.
pub const MAX_TIES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cone {
    pub id: String,
    pub rays: [usize; 2],
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleVertexComplex {
    pub rays: Vec<String>,
    pub cones: Vec<Cone>,
    /// Link of `O`: node `i` is ray `i`, arc `j` is cone `j`.
    pub link: LinkGraph,
    ray_index: HashMap<String, usize>,
    cone_index: HashMap<String, usize>,
}

/// A point of a cone complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConePoint {
    Origin,
    OnRay { ray: usize, radius: f64 },
    /// Polar coordinates, angle measured from the cone's first ray.
    InCone { cone: usize, angle: f64, radius: f64 },
    /// Cartesian coordinates in a right-angled cone: `x` along the first ray.
    InQuadrant { cone: usize, x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LinkDist {
    Finite(f64),
    AtLeastPi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    pub length: f64,
    pub through_origin: bool,
    /// Interior rays crossed, with the crossing distance from `O`.
    pub crossings: Vec<(usize, f64)>,
    pub link_path: Option<LinkPath>,
}

impl SingleVertexComplex {
    /// Build without checking the link condition.
    pub fn build(rays: Vec<String>, cones: Vec<(String, [String; 2], f64)>) -> Result<Self> {
        let mut ray_index = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if ray_index.insert(r.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate ray id {r}")));
            }
        }
        let mut cone_index = HashMap::new();
        let mut cs = Vec::new();
        for (i, (id, rr, angle)) in cones.into_iter().enumerate() {
            if cone_index.insert(id.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate cone id {id}")));
            }
            let mut ids = [0; 2];
            for k in 0..2 {
                ids[k] = *ray_index
                    .get(&rr[k])
                    .ok_or_else(|| Error::MalformedInput(format!("cone {id} references unknown ray {}", rr[k])))?;
            }
            if ids[0] == ids[1] {
                return Err(Error::MalformedInput(format!("cone {id} uses one ray twice")));
            }
            if !(angle > 0.0 && angle <= PI + 1e-12) {
                return Err(Error::MalformedInput(format!("cone {id} angle {angle} outside (0, pi]")));
            }
            cs.push(Cone { id, rays: ids, angle: angle.min(PI) });
        }
        let arcs = cs.iter().enumerate().map(|(i, c)| LinkArc { key: i, ends: c.rays, weight: c.angle }).collect();
        let link = LinkGraph::new(None, (0..rays.len()).collect(), arcs);
        Ok(Self { rays, cones: cs, link, ray_index, cone_index })
    }

    /// Build and require the link condition.
    pub fn new(rays: Vec<String>, cones: Vec<(String, [String; 2], f64)>) -> Result<Self> {
        let c = Self::build(rays, cones)?;
        let rep = c.validate();
        if !rep.ok {
            return Err(Error::NotCat0(format!("{:?}", rep.violations)));
        }
        Ok(c)
    }

    /// Link condition at `O`. Cones on a graph are contractible, so no
    /// topological proxy is needed.
    pub fn validate(&self) -> Cat0Report {
        let mut violations = Vec::new();
        if let Some(cyc) = self.link.shortest_cycle() {
            if cyc.length < 2.0 * PI - TOL {
                violations.push(Cat0Violation::ShortCycle { vertex: 0, length: cyc.length, faces: cyc.arcs });
            }
        }
        Cat0Report { ok: violations.is_empty(), violations }
    }

    pub fn ray_index(&self, id: &str) -> Option<usize> {
        self.ray_index.get(id).copied()
    }

    pub fn cone_index(&self, id: &str) -> Option<usize> {
        self.cone_index.get(id).copied()
    }

    pub fn is_cube(&self) -> bool {
        self.cones.iter().all(|c| (c.angle - FRAC_PI_2).abs() < 1e-12)
    }

    /// Cones incident to a ray.
    pub fn cones_at(&self, ray: usize) -> &[usize] {
        &self.link.incident[ray]
    }

    pub fn check_point(&self, p: &ConePoint) -> Result<()> {
        let bad = |m: &str| Err(Error::PointNotInComplex(m.to_string()));
        match *p {
            ConePoint::Origin => Ok(()),
            ConePoint::OnRay { ray, radius } => {
                if ray >= self.rays.len() {
                    bad("unknown ray")
                } else if !(radius > 0.0 && radius.is_finite()) {
                    bad("radius must be positive")
                } else {
                    Ok(())
                }
            }
            ConePoint::InCone { cone, angle, radius } => {
                if cone >= self.cones.len() {
                    bad("unknown cone")
                } else if !(0.0..=self.cones[cone].angle).contains(&angle) {
                    bad("angle outside cone")
                } else if !(radius > 0.0 && radius.is_finite()) {
                    bad("radius must be positive")
                } else {
                    Ok(())
                }
            }
            ConePoint::InQuadrant { cone, x, y } => {
                if cone >= self.cones.len() {
                    bad("unknown cone")
                } else if (self.cones[cone].angle - FRAC_PI_2).abs() > 1e-12 {
                    bad("quadrant coordinates need a right-angled cone")
                } else if x < 0.0 || y < 0.0 || x + y <= 0.0 {
                    bad("quadrant coordinates must be nonnegative and not both zero")
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl ConePoint {
    pub fn is_origin(&self) -> bool {
        matches!(self, ConePoint::Origin)
    }

    pub fn radius(&self) -> f64 {
        match *self {
            ConePoint::Origin => 0.0,
            ConePoint::OnRay { radius, .. } | ConePoint::InCone { radius, .. } => radius,
            ConePoint::InQuadrant { x, y, .. } => x.hypot(y),
        }
    }

    /// Direction in the link of `O`; `None` for the origin.
    pub fn direction(&self, c: &SingleVertexComplex) -> Option<LinkPoint> {
        let p = match *self {
            ConePoint::Origin => return None,
            ConePoint::OnRay { ray, .. } => LinkPoint::Node(ray),
            ConePoint::InCone { cone, angle, .. } => LinkPoint::Arc { arc: cone, offset: angle },
            ConePoint::InQuadrant { cone, x, y } => LinkPoint::Arc { arc: cone, offset: y.atan2(x) },
        };
        Some(c.link.normalize(p))
    }

    /// Coordinates in the local frame of `cone` (first ray on +x), if the point lies in it.
    pub fn in_cone(&self, c: &SingleVertexComplex, cone: usize) -> Option<P2> {
        match *self {
            ConePoint::Origin => Some([0.0, 0.0]),
            ConePoint::InQuadrant { cone: k, x, y } if k == cone => Some([x, y]),
            _ => match self.direction(c)? {
                LinkPoint::Node(r) => {
                    let cn = &c.cones[cone];
                    let r0 = self.radius();
                    if cn.rays[0] == r {
                        Some([r0, 0.0])
                    } else if cn.rays[1] == r {
                        Some(geom::polar(r0, cn.angle))
                    } else {
                        None
                    }
                }
                LinkPoint::Arc { arc, offset } => (arc == cone).then(|| geom::polar(self.radius(), offset)),
            },
        }
    }

    /// Parse a point given by its cone-local coordinates.
    pub fn from_cone_coords(c: &SingleVertexComplex, cone: usize, p: P2) -> ConePoint {
        let r = geom::norm(p);
        if r <= 0.0 {
            return ConePoint::Origin;
        }
        let ang = p[1].atan2(p[0]).clamp(0.0, c.cones[cone].angle);
        match c.link.normalize(LinkPoint::Arc { arc: cone, offset: ang }) {
            LinkPoint::Node(ray) => ConePoint::OnRay { ray, radius: r },
            _ => ConePoint::InCone { cone, angle: ang, radius: r },
        }
    }
}

/// Truncated link distance, with distances within [`PI_GUARD`] of π classed as at least π.
pub fn link_distance(g: &LinkGraph, a: LinkPoint, b: LinkPoint) -> LinkDist {
    match g.distance(a, b, PI) {
        Some(d) if d < PI - PI_GUARD => LinkDist::Finite(d),
        _ => LinkDist::AtLeastPi,
    }
}

/// All tied link paths shorter than π between two directions.
pub fn short_paths(g: &LinkGraph, a: LinkPoint, b: LinkPoint) -> Vec<LinkPath> {
    g.shortest_paths(a, b, PI - PI_GUARD, MAX_TIES)
        .into_iter()
        .filter(|p| p.length < PI - PI_GUARD)
        .collect()
}

/// Distance from `O` where the chord between `(ra, 0)` and `rb·(cos d, sin d)`
/// crosses the ray at angle `phi ∈ (0, d)`.
pub fn chord_crossing(ra: f64, rb: f64, d: f64, phi: f64) -> f64 {
    ra * rb * d.sin() / (ra * phi.sin() + rb * (d - phi).sin())
}

pub fn geodesic(c: &SingleVertexComplex, a: &ConePoint, b: &ConePoint) -> Result<GeodesicResult> {
    c.check_point(a)?;
    c.check_point(b)?;
    let (ra, rb) = (a.radius(), b.radius());
    let through = |length| Ok(GeodesicResult { length, through_origin: true, crossings: Vec::new(), link_path: None });
    let (Some(da), Some(db)) = (a.direction(c), b.direction(c)) else {
        return through(ra + rb);
    };
    let mut paths = short_paths(&c.link, da, db);
    if paths.is_empty() {
        return through(ra + rb);
    }
    let path = paths.swap_remove(0);
    let d = path.length;
    let length = (ra * ra + rb * rb - 2.0 * ra * rb * d.cos()).max(0.0).sqrt();
    let crossings = path
        .interior_nodes()
        .into_iter()
        .filter(|&(_, phi)| phi > 0.0 && phi < d)
        .map(|(n, phi)| (c.link.nodes[n], chord_crossing(ra, rb, d, phi)))
        .collect();
    Ok(GeodesicResult { length, through_origin: false, crossings, link_path: Some(path) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HullWitness {
    OriginInP(usize),
    Pair(usize, usize),
    /// Link arcs of a cycle in G[P].
    Cycle(Vec<usize>),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginInHull {
    pub in_hull: bool,
    pub witness: HullWitness,
}

/// The union of pairwise short link paths, as merged sub-intervals of arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkSubset {
    /// `(arc, lo, hi)` offsets, merged and sorted.
    pub intervals: Vec<(usize, f64, f64)>,
    pub nodes: BTreeSet<usize>,
}

impl LinkSubset {
    fn add_interval(&mut self, arc: usize, lo: f64, hi: f64) {
        self.intervals.push((arc, lo.min(hi), lo.max(hi)));
    }

    fn merge(&mut self) {
        self.intervals.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(usize, f64, f64)> = Vec::new();
        for &(arc, lo, hi) in &self.intervals {
            if let Some(last) = out.last_mut() {
                if last.0 == arc && lo <= last.2 + 1e-12 {
                    last.2 = last.2.max(hi);
                    continue;
                }
            }
            out.push((arc, lo, hi));
        }
        self.intervals = out;
    }

    /// Arcs covered end to end.
    pub fn full_arcs(&self, g: &LinkGraph) -> Vec<usize> {
        self.intervals
            .iter()
            .filter(|&&(arc, lo, hi)| lo <= 1e-12 && hi >= g.arcs[arc].weight - 1e-12)
            .map(|&(arc, ..)| arc)
            .collect()
    }

    /// A cycle in the breakpoint multigraph, if any. Partial arcs hang off
    /// single nodes and never close a cycle, so only full arcs matter; a
    /// component has a cycle iff it has at least as many arcs as nodes.
    pub fn cycle(&self, g: &LinkGraph) -> Option<Vec<usize>> {
        let n = g.nodes.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for arc in self.full_arcs(g) {
            let [u, w] = g.arcs[arc].ends;
            let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
            if ru == rw {
                // Path u → w in the forest built so far closes the cycle.
                let mut prev = vec![None; n];
                let mut seen = vec![false; n];
                let mut q = VecDeque::from([u]);
                seen[u] = true;
                while let Some(x) = q.pop_front() {
                    for &(y, a) in &adj[x] {
                        if !seen[y] {
                            seen[y] = true;
                            prev[y] = Some((x, a));
                            q.push_back(y);
                        }
                    }
                }
                let mut cyc = vec![arc];
                let mut cur = w;
                while let Some((p, a)) = prev[cur] {
                    cyc.push(a);
                    cur = p;
                }
                return Some(cyc);
            }
            parent[ru] = rw;
            adj[u].push((w, arc));
            adj[w].push((u, arc));
        }
        None
    }
}

fn directions(c: &SingleVertexComplex, pts: &[ConePoint]) -> Vec<LinkPoint> {
    pts.iter().filter_map(|p| p.direction(c)).collect()
}

/// G[P]; fails when some pair is at link distance at least π.
pub fn build_gp(c: &SingleVertexComplex, pts: &[ConePoint]) -> Result<LinkSubset> {
    let dirs = directions(c, pts);
    let mut s = LinkSubset { intervals: Vec::new(), nodes: BTreeSet::new() };
    for d in &dirs {
        match *d {
            LinkPoint::Node(n) => {
                s.nodes.insert(n);
            }
            LinkPoint::Arc { arc, offset } => s.add_interval(arc, offset, offset),
        }
    }
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let paths = short_paths(&c.link, dirs[i], dirs[j]);
            if paths.is_empty() {
                return Err(Error::PairAtLeastPi);
            }
            for p in paths {
                for h in &p.hops {
                    let off = |q: LinkPoint| match q {
                        LinkPoint::Node(n) => c.link.node_offset(h.arc, n),
                        LinkPoint::Arc { offset, .. } => offset,
                    };
                    s.add_interval(h.arc, off(h.from), off(h.to));
                    for q in [h.from, h.to] {
                        if let LinkPoint::Node(n) = q {
                            s.nodes.insert(n);
                        }
                    }
                }
            }
        }
    }
    s.merge();
    Ok(s)
}

pub fn origin_in_hull(c: &SingleVertexComplex, pts: &[ConePoint]) -> OriginInHull {
    if let Some(i) = pts.iter().position(|p| p.is_origin()) {
        return OriginInHull { in_hull: true, witness: HullWitness::OriginInP(i) };
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i].direction(c).unwrap(), pts[j].direction(c).unwrap());
            if link_distance(&c.link, a, b) == LinkDist::AtLeastPi {
                return OriginInHull { in_hull: true, witness: HullWitness::Pair(i, j) };
            }
        }
    }
    let gp = build_gp(c, pts).expect("all pairs are closer than pi");
    match gp.cycle(&c.link) {
        Some(cyc) => OriginInHull { in_hull: true, witness: HullWitness::Cycle(cyc) },
        None => OriginInHull { in_hull: false, witness: HullWitness::None },
    }
}

fn same_dir(a: LinkPoint, b: LinkPoint) -> bool {
    match (a, b) {
        (LinkPoint::Node(x), LinkPoint::Node(y)) => x == y,
        (LinkPoint::Arc { arc: x, offset: p }, LinkPoint::Arc { arc: y, offset: q }) => x == y && (p - q).abs() <= 1e-12,
        _ => false,
    }
}

/// Rays supporting the hull: the closure of the P-directions under taking the
/// nodes of short link paths between members.
pub fn hull_edge_support(c: &SingleVertexComplex, pts: &[ConePoint]) -> BTreeSet<usize> {
    let mut members: Vec<LinkPoint> = Vec::new();
    for d in directions(c, pts) {
        if !members.iter().any(|&m| same_dir(m, d)) {
            members.push(d);
        }
    }
    let mut frontier: VecDeque<usize> = (0..members.len()).collect();
    while let Some(vi) = frontier.pop_front() {
        let v = members[vi];
        let mut k = 0;
        while k < members.len() {
            let w = members[k];
            k += 1;
            for p in short_paths(&c.link, v, w) {
                for h in &p.hops {
                    for q in [h.from, h.to] {
                        if let LinkPoint::Node(_) = q {
                            if !members.iter().any(|&m| same_dir(m, q)) {
                                members.push(q);
                                frontier.push_back(members.len() - 1);
                            }
                        }
                    }
                }
            }
        }
    }
    members
        .into_iter()
        .filter_map(|m| match m {
            LinkPoint::Node(n) => Some(n),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The plane as four right-angled cones.
    fn plane() -> SingleVertexComplex {
        let rays = (0..4).map(|i| format!("r{i}")).collect();
        let cones = (0..4).map(|i| (format!("c{i}"), [format!("r{i}"), format!("r{}", (i + 1) % 4)], FRAC_PI_2)).collect();
        SingleVertexComplex::new(rays, cones).unwrap()
    }

    #[test]
    fn adjacent_rays_unfold_to_chord() {
        let c = plane();
        let g = geodesic(&c, &ConePoint::OnRay { ray: 0, radius: 1.0 }, &ConePoint::OnRay { ray: 1, radius: 1.0 }).unwrap();
        assert!(!g.through_origin);
        assert!((g.length - 2f64.sqrt()).abs() < 1e-15);
        assert!(g.crossings.is_empty());
    }

    #[test]
    fn identical_points_have_zero_length() {
        let c = plane();
        let p = ConePoint::InCone { cone: 1, angle: 0.4, radius: 2.0 };
        assert_eq!(geodesic(&c, &p, &p).unwrap().length, 0.0);
    }

    #[test]
    fn opposite_rays_pass_through_origin() {
        let c = plane();
        let g = geodesic(&c, &ConePoint::OnRay { ray: 0, radius: 1.0 }, &ConePoint::OnRay { ray: 2, radius: 3.0 }).unwrap();
        assert!(g.through_origin);
        assert_eq!(g.length, 4.0);
    }

    #[test]
    fn crossing_distance_on_middle_ray() {
        let c = plane();
        let a = ConePoint::InCone { cone: 0, angle: 0.5, radius: 1.0 };
        let b = ConePoint::InCone { cone: 1, angle: 0.5, radius: 1.0 };
        let g = geodesic(&c, &a, &b).unwrap();
        assert_eq!(g.crossings.len(), 1);
        assert_eq!(g.crossings[0].0, 1);
        let want = 1.0 / (0.5f64.cos() + 0.5f64.sin());
        assert!((g.crossings[0].1 - want).abs() < 1e-15);
    }

    #[test]
    fn short_cycle_rejected() {
        let rays = (0..3).map(|i| format!("r{i}")).collect();
        let cones = (0..3).map(|i| (format!("c{i}"), [format!("r{i}"), format!("r{}", (i + 1) % 3)], FRAC_PI_2)).collect();
        assert!(matches!(SingleVertexComplex::new(rays, cones), Err(Error::NotCat0(_))));
    }

    #[test]
    fn single_point_hull_excludes_origin() {
        let c = plane();
        let r = origin_in_hull(&c, &[ConePoint::OnRay { ray: 0, radius: 1.0 }]);
        assert!(!r.in_hull);
    }

    #[test]
    fn support_of_single_ray_point() {
        let c = plane();
        let b = hull_edge_support(&c, &[ConePoint::OnRay { ray: 2, radius: 1.0 }, ConePoint::OnRay { ray: 2, radius: 2.0 }]);
        assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn two_points_in_one_cone_give_one_sub_arc() {
        let c = plane();
        let p = [ConePoint::InCone { cone: 3, angle: 0.2, radius: 1.0 }, ConePoint::InCone { cone: 3, angle: 0.9, radius: 1.0 }];
        let s = build_gp(&c, &p).unwrap();
        assert_eq!(s.intervals, vec![(3, 0.2, 0.9)]);
        assert!(s.nodes.is_empty());
    }
}
