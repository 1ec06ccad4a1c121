//! Single-source shortest paths in 2D CAT(0) complexes: ruffles, the shortest
//! path map built by frontier propagation, the last-step map and path queries.
//!
//! Geodesics are unique, so every locally straight wedge of paths is a wedge of
//! shortest paths and the frontier can be processed in any order (FIFO here).

pub mod brute;
pub mod fixtures;
pub mod last_step;
pub mod trees;

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use log::{debug, trace};
use serde::Serialize;

use crate::complex_core::{glue, EdgeInfo, FaceInfo, LinkGraph, LinkPoint, Location, PolyComplex2D, TOL};
use crate::error::{Error, Result};
use crate::geom::{self, Iso2, P2};

pub use brute::brute_force_geodesic;
pub use last_step::{derive_last_step, naive_propagation, query_path, verify_entry_lemmas, EdgeIn, FaceEntry, FaceType, LastStepMap, LemmaReport, NaiveReport};
pub use trees::TreeStats;
pub use trees::{branch_counts, BranchReport};

/// Ruffle membership slack: distances within this of π count as π.
pub const RUFFLE_TOL: f64 = 1e-9;
/// Ruffle intervals narrower than this are single rays.
const RAY_WIDTH: f64 = 1e-8;
pub const DEFAULT_REGION_CAP: usize = 1_000_000;

/// Points of `G_v` at link distance at least π from the incoming direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ruffle {
    pub vertex: usize,
    pub incoming: Option<LinkPoint>,
    /// `(link arc, lo, hi)` offset intervals; `lo == hi` for a single ray.
    pub intervals: Vec<(usize, f64, f64)>,
    /// Link nodes (incident edges) inside the ruffle.
    pub nodes: Vec<usize>,
    /// Frontier points at distance exactly π.
    pub boundary: Vec<LinkPoint>,
}

impl Ruffle {
    /// Boundary rays lifted to the complex: `(face, unit direction in its frame)`
    /// for arc points, or the edge for node points.
    pub fn boundary_rays(&self, c: &PolyComplex2D) -> Vec<std::result::Result<(usize, P2), usize>> {
        let v = self.vertex;
        self.boundary
            .iter()
            .map(|p| match *p {
                LinkPoint::Node(n) => Err(c.vertex_edges[v][n]),
                LinkPoint::Arc { arc, offset } => {
                    let f = c.vertex_faces[v][arc];
                    Ok((f, corner_dir(c, f, v, offset)))
                }
            })
            .collect()
    }
}

/// Unit direction at corner `v` of face `f`, `offset` radians counterclockwise from its first edge.
fn corner_dir(c: &PolyComplex2D, f: usize, v: usize, offset: f64) -> P2 {
    let face = &c.faces[f];
    let i = face.local(v).unwrap();
    let base = geom::sub(face.coords[(i + 1) % 3], face.coords[i]);
    let b = geom::scale(base, 1.0 / geom::norm(base));
    let (s, co) = offset.sin_cos();
    [b[0] * co - b[1] * s, b[0] * s + b[1] * co]
}

fn ruffle_in(g: &LinkGraph, v: usize, incoming: Option<LinkPoint>) -> Ruffle {
    let Some(inc) = incoming.map(|p| g.normalize(p)) else {
        return Ruffle {
            vertex: v,
            incoming: None,
            intervals: g.arcs.iter().enumerate().map(|(a, arc)| (a, 0.0, arc.weight)).collect(),
            nodes: (0..g.nodes.len()).collect(),
            boundary: Vec::new(),
        };
    };
    let d = g.search(&g.seeds(inc), f64::INFINITY, None).dist;
    let mut r = Ruffle { vertex: v, incoming: Some(inc), intervals: Vec::new(), nodes: Vec::new(), boundary: Vec::new() };
    for (a, arc) in g.arcs.iter().enumerate() {
        if matches!(inc, LinkPoint::Arc { arc: x, .. } if x == a) && arc.weight < PI {
            continue;
        }
        let w = arc.weight;
        let [n0, n1] = arc.ends;
        // Exact offsets at distance π; the tolerance only decides membership.
        let lo = (PI - d[n0]).max(0.0);
        let hi = (w - PI + d[n1]).min(w);
        if lo > hi + 2.0 * RUFFLE_TOL {
            continue;
        }
        if hi - lo < RAY_WIDTH {
            if lo <= RUFFLE_TOL || hi >= w - RUFFLE_TOL {
                // A single point at a node: the lengthwise edge covers it.
                continue;
            }
            let mid = 0.5 * (lo + hi);
            r.intervals.push((a, mid, mid));
            r.boundary.push(LinkPoint::Arc { arc: a, offset: mid });
            continue;
        }
        r.intervals.push((a, lo, hi));
        for (t, at_node) in [(lo, lo == 0.0), (hi, hi == w)] {
            if !at_node {
                r.boundary.push(LinkPoint::Arc { arc: a, offset: t });
            }
        }
    }
    for n in 0..g.nodes.len() {
        if d[n] >= PI - RUFFLE_TOL {
            r.nodes.push(n);
            if d[n] <= PI + RUFFLE_TOL {
                r.boundary.push(LinkPoint::Node(n));
            }
        }
    }
    r
}

/// The ruffle of `v` for a path arriving along `incoming`; `None` means `v` is the source.
pub fn ruffle(c: &PolyComplex2D, v: usize, incoming: Option<LinkPoint>) -> Result<Ruffle> {
    Ok(ruffle_in(&c.link_graph(v)?, v, incoming))
}

/// How the geodesic reaches a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum VertexIn {
    Source,
    /// Along this edge from its other end.
    Edge(usize),
    /// Straight through this face from the apex at `from` (face frame).
    Face { face: usize, apex: usize, from: P2 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegionEntry {
    Vertex(usize),
    Segment { edge: usize, t0: f64, t1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegionExit {
    Segment { edge: usize, t0: f64, t1: f64 },
    Vertex(usize),
}

/// Boundary-tree membership of a region's boundary ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RayTag {
    pub branch: Option<usize>,
    /// Faces entered since the branch began.
    pub hop: u32,
}

impl RayTag {
    const NONE: RayTag = RayTag { branch: None, hop: 0 };
}

/// A two-dimensional region: a cone of paths with apex at a vertex, clipped to one face.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub face: usize,
    pub apex: usize,
    /// Apex position in the face frame.
    pub apex_pos: P2,
    pub apex_dist: f64,
    pub entry: RegionEntry,
    pub exits: Vec<RegionExit>,
    /// Boundary rays as entry points in the face frame, lower and upper side.
    pub ray_points: [P2; 2],
    pub rays: [RayTag; 2],
}

impl Region {
    /// Geodesic distance from the source to a face-frame point of the region.
    pub fn dist(&self, p: P2) -> f64 {
        self.apex_dist + geom::dist(self.apex_pos, p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchNode {
    pub tree: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Branches grown from one ruffle boundary ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryTree {
    pub vertex: usize,
    pub dir: LinkPoint,
    pub root: usize,
}


/// A face of the working complex cut out of an input face, with the
/// input-frame positions of its vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPart {
    pub original: usize,
    pub face: usize,
    pub corners: [P2; 3],
}

/// How the source's cell was subdivided. Unsplit cells keep their indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SourceSplit {
    pub parts: Vec<SplitPart>,
    /// `(input edge, source offset, [half from ends[0], half to ends[1]])`.
    pub edge: Option<(usize, f64, [usize; 2])>,
}

fn edge_info(c: &PolyComplex2D, e: usize) -> EdgeInfo {
    let ed = &c.edges[e];
    EdgeInfo { id: ed.id.clone(), ends: ed.ends.map(|v| c.vertices[v].clone()), length: ed.length }
}

fn face_info(c: &PolyComplex2D, f: usize) -> FaceInfo {
    FaceInfo { id: c.faces[f].id.clone(), edges: c.faces[f].edges.map(|e| c.edges[e].id.clone()) }
}

fn fresh(taken: impl Fn(&str) -> bool, base: String) -> String {
    let mut id = base;
    while taken(&id) {
        id.push('\'');
    }
    id
}

/// Subdivide the complex so that `at` becomes a vertex.
pub fn insert_vertex(c: &PolyComplex2D, at: &Location) -> Result<(PolyComplex2D, usize, SourceSplit)> {
    c.validate_location(at)?;
    let at = c.canonical_location(*at, 1e-12);
    let mut vertices = c.vertices.clone();
    let src_id = fresh(|s| c.vertex_index(s).is_some(), "source".into());
    vertices.push(src_id.clone());
    let src = vertices.len() - 1;
    let mut edges: Vec<EdgeInfo> = (0..c.edges.len()).map(|e| edge_info(c, e)).collect();
    let mut faces: Vec<FaceInfo> = (0..c.faces.len()).map(|f| face_info(c, f)).collect();
    let eid = |s: String| fresh(|x| c.edge_index(x).is_some(), s);
    let fid = |s: String| fresh(|x| c.face_index(x).is_some(), s);
    // (slot, original face, source position in its frame)
    let mut cut: Vec<(usize, usize, P2)> = Vec::new();
    let mut split = SourceSplit::default();
    match at {
        Location::Vertex(v) => return Ok((c.clone(), v, split)),
        Location::Face { face, p } => {
            let fc = &c.faces[face];
            let spoke: Vec<String> = (0..3).map(|k| eid(format!("{}/s{k}", fc.id))).collect();
            for k in 0..3 {
                edges.push(EdgeInfo {
                    id: spoke[k].clone(),
                    ends: [src_id.clone(), c.vertices[fc.verts[k]].clone()],
                    length: geom::dist(p, fc.coords[k]),
                });
            }
            for k in 0..3 {
                let table = FaceInfo {
                    id: fid(format!("{}/{k}", fc.id)),
                    edges: [spoke[k].clone(), c.edges[fc.opp[(k + 2) % 3]].id.clone(), spoke[(k + 1) % 3].clone()],
                };
                let slot = if k == 0 { faces[face] = table; face } else { faces.push(table); faces.len() - 1 };
                cut.push((slot, face, p));
            }
        }
        Location::Edge { edge, t } => {
            let ed = &c.edges[edge];
            let [a, b] = ed.ends;
            let h0 = eid(format!("{}/0", ed.id));
            let h1 = eid(format!("{}/1", ed.id));
            edges[edge] = EdgeInfo { id: h0.clone(), ends: [c.vertices[a].clone(), src_id.clone()], length: t };
            edges.push(EdgeInfo { id: h1.clone(), ends: [src_id.clone(), c.vertices[b].clone()], length: ed.length - t });
            split.edge = Some((edge, t, [edge, edges.len() - 1]));
            for &g in &c.edge_faces[edge] {
                let fc = &c.faces[g];
                let w = fc.verts[fc.opposite_of(edge).unwrap()];
                let p = c.edge_point(g, edge, t).unwrap();
                let sp = eid(format!("{}/s", fc.id));
                edges.push(EdgeInfo {
                    id: sp.clone(),
                    ends: [src_id.clone(), c.vertices[w].clone()],
                    length: geom::dist(p, c.vertex_pos(g, w).unwrap()),
                });
                let side = |x: usize| {
                    let e = *fc.edges.iter().find(|&&e| e != edge && c.edges[e].ends.contains(&x)).unwrap();
                    c.edges[e].id.clone()
                };
                faces[g] = FaceInfo { id: fid(format!("{}/0", fc.id)), edges: [h0.clone(), sp.clone(), side(a)] };
                faces.push(FaceInfo { id: fid(format!("{}/1", fc.id)), edges: [h1.clone(), side(b), sp] });
                cut.push((g, g, p));
                cut.push((faces.len() - 1, g, p));
            }
        }
    }
    let out = PolyComplex2D::new(vertices, edges, faces)?;
    for (slot, original, p) in cut {
        let corners = out.faces[slot].verts.map(|v| if v == src { p } else { c.vertex_pos(original, v).unwrap() });
        split.parts.push(SplitPart { original, face: slot, corners });
    }
    Ok((out, src, split))
}

fn barycentric(tri: &[P2; 3], p: P2) -> [f64; 3] {
    let area = geom::orient(tri[0], tri[1], tri[2]);
    let l0 = geom::orient(p, tri[1], tri[2]) / area;
    let l1 = geom::orient(tri[0], p, tri[2]) / area;
    [l0, l1, 1.0 - l0 - l1]
}

impl SourceSplit {
    /// Translate a location of the input complex to the working complex.
    pub fn locate(&self, work: &PolyComplex2D, loc: &Location) -> Result<Location> {
        if let (Some((e, t, halves)), Location::Edge { edge, t: x }) = (self.edge, *loc) {
            if edge == e {
                let l = if x <= t { Location::Edge { edge: halves[0], t: x } } else { Location::Edge { edge: halves[1], t: x - t } };
                return Ok(work.canonical_location(l, 1e-12));
            }
        }
        let Location::Face { face, p } = *loc else { return Ok(*loc) };
        let parts: Vec<&SplitPart> = self.parts.iter().filter(|s| s.original == face).collect();
        if parts.is_empty() {
            return Ok(*loc);
        }
        let best = parts
            .iter()
            .map(|s| (s, barycentric(&s.corners, p)))
            .max_by(|a, b| a.1.iter().copied().fold(f64::INFINITY, f64::min).total_cmp(&b.1.iter().copied().fold(f64::INFINITY, f64::min)))
            .unwrap();
        let (s, l) = best;
        let k = work.faces[s.face].coords;
        let q = [l[0] * k[0][0] + l[1] * k[1][0] + l[2] * k[2][0], l[0] * k[0][1] + l[1] * k[1][1] + l[2] * k[2][1]];
        Ok(work.canonical_location(Location::Face { face: s.face, p: q }, 1e-12))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathMap {
    /// The complex the map lives on: the input, with the source's cell split if needed.
    pub complex: PolyComplex2D,
    pub source: usize,
    pub split: SourceSplit,
    pub vertex_dist: Vec<f64>,
    pub vertex_in: Vec<VertexIn>,
    pub ruffles: Vec<Option<Ruffle>>,
    pub regions: Vec<Region>,
    /// Edges traversed lengthwise, with the vertex they start from.
    pub along: Vec<(usize, usize)>,
    /// Faces from which paths cross each edge.
    pub edge_from: Vec<Vec<usize>>,
    /// `(face, entry edge)` pairs with positive-length entry.
    pub face_edge_entries: Vec<(usize, usize)>,
    /// `(face, vertex, lo, hi)` ruffle sectors; `lo == hi` marks a dividing ray.
    pub face_vertex_entries: Vec<(usize, usize, f64, f64)>,
    pub branches: Vec<BranchNode>,
    pub trees: Vec<BoundaryTree>,
    /// `(branch, face, hop)` for every face a branch enters.
    pub branch_visits: Vec<(usize, usize, u32)>,
    /// Vertices reached twice with lengths disagreeing beyond tolerance.
    pub conflicts: usize,
}

impl ShortestPathMap {
    /// Total regions: two-dimensional cones, lengthwise edges and vertices.
    pub fn region_count(&self) -> usize {
        self.regions.len() + self.along.len() + self.complex.vertices.len()
    }

    pub fn regions_in(&self, face: usize) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(move |r| r.face == face)
    }

    pub fn locate(&self, original: &Location) -> Result<Location> {
        self.split.locate(&self.complex, original)
    }

    /// Source distance of a working-complex location, read off the regions.
    pub fn distance(&self, loc: &Location) -> Option<f64> {
        let c = &self.complex;
        match *loc {
            Location::Vertex(v) => Some(self.vertex_dist[v]),
            _ => {
                let mut best: Option<f64> = None;
                for f in c.faces_of(loc) {
                    let p = c.pos_in_face(loc, f)?;
                    for r in self.regions_in(f) {
                        if r.covers(p) {
                            best = Some(best.map_or(r.dist(p), |b: f64| b.min(r.dist(p))));
                        }
                    }
                }
                if let Location::Edge { edge, t } = *loc {
                    for &(e, from) in &self.along {
                        if e == edge {
                            let s = if c.edges[e].ends[0] == from { t } else { c.edges[e].length - t };
                            best = Some(best.map_or(self.vertex_dist[from] + s, |b| b.min(self.vertex_dist[from] + s)));
                        }
                    }
                }
                best
            }
        }
    }
}

impl Region {
    /// Whether face-frame point `p` lies in the closed cone between the boundary rays.
    pub fn covers(&self, p: P2) -> bool {
        let [l, h] = [0, 1].map(|k| geom::sub(self.ray_points[k], self.apex_pos));
        let x = geom::sub(p, self.apex_pos);
        let sg = geom::cross(l, h).signum();
        let tol = 1e-9 * geom::norm(x).max(1.0);
        sg * geom::cross(l, x) / geom::norm(l) >= -tol && sg * geom::cross(x, h) / geom::norm(h) >= -tol
    }
}

struct Front {
    edge: usize,
    from: usize,
    apex: usize,
    apex_pos: P2,
    d0: f64,
    /// Sorted by offset along the edge.
    ends: [(f64, RayTag); 2],
}

enum Item {
    Vertex(usize),
    Segment(Front),
}

/// Shortest segment length worth propagating, relative to the edge.
const SEG_MIN: f64 = 1e-11;

struct Builder<'a> {
    c: &'a PolyComplex2D,
    cap: usize,
    spm: ShortestPathMap,
    reached: Vec<Option<LinkPoint>>,
    done: Vec<bool>,
    queue: VecDeque<Item>,
    roots: Vec<(usize, LinkPoint, usize)>,
    forks: HashMap<(usize, usize), usize>,
    links: Vec<Option<LinkGraph>>,
}

impl<'a> Builder<'a> {
    fn count(&self) -> Result<()> {
        if self.spm.regions.len() + self.spm.along.len() > self.cap {
            Err(Error::BudgetExceeded(self.cap))
        } else {
            Ok(())
        }
    }

    fn link(&mut self, v: usize) -> Result<&LinkGraph> {
        if self.links[v].is_none() {
            self.links[v] = Some(self.c.link_graph(v)?);
        }
        Ok(self.links[v].as_ref().unwrap())
    }

    fn reach(&mut self, v: usize, d: f64, inc: LinkPoint, how: VertexIn) {
        if self.reached[v].is_some() {
            let old = self.spm.vertex_dist[v];
            if (old - d).abs() > 1e-7 * old.max(1.0) {
                debug!("vertex {} reached at {d} and {old}", self.c.vertices[v]);
                self.spm.conflicts += 1;
            }
            return;
        }
        self.reached[v] = Some(inc);
        self.spm.vertex_dist[v] = d;
        self.spm.vertex_in[v] = how;
        self.queue.push_back(Item::Vertex(v));
    }

    /// Branch for the ruffle boundary ray of `v` at link point `p`, created on demand.
    fn root(&mut self, v: usize, p: LinkPoint) -> usize {
        let same = |a: LinkPoint, b: LinkPoint| match (a, b) {
            (LinkPoint::Node(x), LinkPoint::Node(y)) => x == y,
            (LinkPoint::Arc { arc: x, offset: s }, LinkPoint::Arc { arc: y, offset: t }) => x == y && (s - t).abs() <= 1e-7,
            _ => false,
        };
        if let Some(&(_, _, b)) = self.roots.iter().find(|r| r.0 == v && same(r.1, p)) {
            return b;
        }
        let tree = self.spm.trees.len();
        let b = self.spm.branches.len();
        self.spm.branches.push(BranchNode { tree, parent: None, children: Vec::new() });
        self.spm.trees.push(BoundaryTree { vertex: v, dir: p, root: b });
        self.roots.push((v, p, b));
        b
    }

    fn fork(&mut self, parent: usize, face: usize) -> usize {
        if let Some(&b) = self.forks.get(&(parent, face)) {
            return b;
        }
        let b = self.spm.branches.len();
        let tree = self.spm.branches[parent].tree;
        self.spm.branches.push(BranchNode { tree, parent: Some(parent), children: Vec::new() });
        self.spm.branches[parent].children.push(b);
        self.forks.insert((parent, face), b);
        b
    }

    fn vertex(&mut self, u: usize) -> Result<()> {
        if self.done[u] {
            return Ok(());
        }
        self.done[u] = true;
        let c = self.c;
        let inc = if u == self.spm.source { None } else { self.reached[u] };
        let r = ruffle_in(self.link(u)?, u, inc);
        let du = self.spm.vertex_dist[u];
        for &n in &r.nodes {
            let e = c.vertex_edges[u][n];
            let w = c.other_end(e, u);
            self.spm.along.push((e, u));
            self.count()?;
            let back = c.link_node(w, e).unwrap();
            self.reach(w, du + c.edges[e].length, LinkPoint::Node(back), VertexIn::Edge(e));
        }
        for &(a, lo, hi) in &r.intervals {
            let f = c.vertex_faces[u][a];
            self.spm.face_vertex_entries.push((f, u, lo, hi));
            if hi - lo < RAY_WIDTH {
                continue;
            }
            let face = &c.faces[f];
            let i = face.local(u).unwrap();
            let w = face.angles[i];
            let (p1, p2) = (face.coords[(i + 1) % 3], face.coords[(i + 2) % 3]);
            let apex = face.coords[i];
            let hit = |theta: f64| -> f64 {
                if theta <= 0.0 {
                    return 0.0;
                }
                if theta >= w {
                    return 1.0;
                }
                let d = corner_dir(c, f, u, theta);
                geom::ray_line(apex, d, p1, p2).map_or(if theta < 0.5 * w { 0.0 } else { 1.0 }, |(_, s)| s.clamp(0.0, 1.0))
            };
            let (s0, s1) = (hit(lo), hit(hi));
            let tag = |b: &mut Self, theta: f64, at_node: bool| {
                if at_node {
                    RayTag::NONE
                } else {
                    RayTag { branch: Some(b.root(u, LinkPoint::Arc { arc: a, offset: theta })), hop: 0 }
                }
            };
            let t_lo = tag(self, lo, lo == 0.0);
            let t_hi = tag(self, hi, hi == w);
            for t in [t_lo, t_hi] {
                if let Some(b) = t.branch {
                    self.spm.branch_visits.push((b, f, 0));
                }
            }
            let e = face.opp[i];
            let l = c.edges[e].length;
            let flip = c.edges[e].ends[0] != face.verts[(i + 1) % 3];
            let tau = |s: f64| if flip { (1.0 - s) * l } else { s * l };
            let (q0, q1) = (geom::lerp(p1, p2, s0), geom::lerp(p1, p2, s1));
            let mut ends = [(tau(s0), t_lo), (tau(s1), t_hi)];
            if ends[0].0 > ends[1].0 {
                ends.swap(0, 1);
            }
            self.spm.regions.push(Region {
                face: f,
                apex: u,
                apex_pos: apex,
                apex_dist: du,
                entry: RegionEntry::Vertex(u),
                exits: vec![RegionExit::Segment { edge: e, t0: ends[0].0, t1: ends[1].0 }],
                ray_points: [q0, q1],
                rays: [t_lo, t_hi],
            });
            self.count()?;
            self.push_segment(Front { edge: e, from: f, apex: u, apex_pos: apex, d0: du, ends });
        }
        self.spm.ruffles[u] = Some(r);
        Ok(())
    }

    fn push_segment(&mut self, s: Front) {
        let l = self.c.edges[s.edge].length;
        if s.ends[1].0 - s.ends[0].0 <= SEG_MIN * l {
            return;
        }
        if !self.spm.edge_from[s.edge].contains(&s.from) {
            self.spm.edge_from[s.edge].push(s.from);
        }
        self.queue.push_back(Item::Segment(s));
    }

    fn segment(&mut self, s: Front) -> Result<()> {
        let c = self.c;
        let e = s.edge;
        let l = c.edges[e].length;
        let [a, b] = c.edges[e].ends;
        let beyond: Vec<usize> = c.edge_faces[e].iter().copied().filter(|&g| g != s.from).collect();
        let forking = beyond.len() >= 2;
        for g in beyond {
            let m = glue(c, Iso2::IDENTITY, g, s.from, e);
            let apex = m.apply(s.apex_pos);
            let (pa, pb) = (c.vertex_pos(g, a).unwrap(), c.vertex_pos(g, b).unwrap());
            let fg = &c.faces[g];
            let ui = fg.opposite_of(e).unwrap();
            let (u, upos) = (fg.verts[ui], fg.coords[ui]);
            let side = |x: usize| *fg.edges.iter().find(|&&k| k != e && c.edges[k].ends.contains(&x)).unwrap();
            let (ea, eb) = (side(a), side(b));
            // Advance and re-root the boundary tags.
            let mut tags = [s.ends[0].1, s.ends[1].1];
            for k in 0..2 {
                let t = s.ends[k].0;
                let at_vertex = if t <= TOL * l.max(1.0) { Some((a, pa)) } else if t >= l - TOL * l.max(1.0) { Some((b, pb)) } else { None };
                if let Some((x, px)) = at_vertex {
                    tags[k] = RayTag::NONE;
                    let dir = geom::sub(px, apex);
                    let fx = &c.faces[g];
                    let xi = fx.local(x).unwrap();
                    let ang = geom::angle_between(geom::sub(fx.coords[(xi + 1) % 3], px), dir);
                    if ang > 1e-9 && ang < fx.angles[xi] - 1e-9 {
                        let arc = c.link_arc(x, g).unwrap();
                        tags[k] = RayTag { branch: Some(self.root(x, LinkPoint::Arc { arc, offset: ang })), hop: 0 };
                    }
                } else if let Some(br) = tags[k].branch {
                    tags[k] = if forking { RayTag { branch: Some(self.fork(br, g)), hop: 0 } } else { RayTag { branch: Some(br), hop: tags[k].hop + 1 } };
                }
                if let Some(br) = tags[k].branch {
                    self.spm.branch_visits.push((br, g, tags[k].hop));
                }
            }
            let q0 = geom::lerp(pa, pb, s.ends[0].0 / l);
            let q1 = geom::lerp(pa, pb, s.ends[1].0 / l);
            let t_u = match geom::ray_line(apex, geom::sub(upos, apex), pa, pb) {
                Some((_, frac)) => frac * l,
                None => f64::NAN,
            };
            let tol = TOL * l.max(1.0);
            let mut exits: Vec<RegionExit> = Vec::new();
            let mut fronts: Vec<Front> = Vec::new();
            let param = |k: usize, q: P2| -> f64 {
                let [x0, x1] = c.edges[k].ends;
                let (p0, p1) = (c.vertex_pos(g, x0).unwrap(), c.vertex_pos(g, x1).unwrap());
                let d = geom::sub(q, apex);
                let s = geom::ray_line(apex, d, p0, p1).map_or_else(
                    || if geom::dist(q, p0) < geom::dist(q, p1) { 0.0 } else { 1.0 },
                    |(_, s)| s.clamp(0.0, 1.0),
                );
                s * c.edges[k].length
            };
            let at_u = |k: usize| if c.edges[k].ends[0] == u { 0.0 } else { c.edges[k].length };
            let mut emit = |k: usize, x: (f64, RayTag), y: (f64, RayTag)| {
                let (x, y) = if x.0 <= y.0 { (x, y) } else { (y, x) };
                exits.push(RegionExit::Segment { edge: k, t0: x.0, t1: y.0 });
                fronts.push(Front { edge: k, from: g, apex: s.apex, apex_pos: apex, d0: s.d0, ends: [x, y] });
            };
            let through_u = !(t_u > s.ends[1].0 + tol || t_u < s.ends[0].0 - tol) && t_u.is_finite();
            if through_u {
                if s.ends[0].0 < t_u - tol {
                    emit(ea, (param(ea, q0), tags[0]), (at_u(ea), RayTag::NONE));
                }
                if s.ends[1].0 > t_u + tol {
                    emit(eb, (at_u(eb), RayTag::NONE), (param(eb, q1), tags[1]));
                }
                exits.push(RegionExit::Vertex(u));
            } else if t_u > s.ends[1].0 || t_u.is_nan() {
                emit(ea, (param(ea, q0), tags[0]), (param(ea, q1), tags[1]));
            } else {
                emit(eb, (param(eb, q0), tags[0]), (param(eb, q1), tags[1]));
            }
            if !self.spm.face_edge_entries.contains(&(g, e)) {
                self.spm.face_edge_entries.push((g, e));
            }
            self.spm.regions.push(Region {
                face: g,
                apex: s.apex,
                apex_pos: apex,
                apex_dist: s.d0,
                entry: RegionEntry::Segment { edge: e, t0: s.ends[0].0, t1: s.ends[1].0 },
                exits,
                ray_points: [q0, q1],
                rays: tags,
            });
            self.count()?;
            trace!("region {} in face {}", self.spm.regions.len(), fg.id);
            if through_u {
                let inc = c.direction(u, g, apex).unwrap();
                self.reach(u, s.d0 + geom::dist(apex, upos), inc, VertexIn::Face { face: g, apex: s.apex, from: apex });
            }
            for f in fronts {
                self.push_segment(f);
            }
        }
        Ok(())
    }
}

/// Build the shortest path map from `source` with at most `region_cap` regions.
pub fn build_spm(c: &PolyComplex2D, source: &Location, region_cap: usize) -> Result<ShortestPathMap> {
    if let Some(e) = c.edge_faces.iter().position(|f| f.is_empty()) {
        return Err(Error::MalformedInput(format!("edge {} lies in no face", c.edges[e].id)));
    }
    let (work, s, split) = insert_vertex(c, source)?;
    let nv = work.vertices.len();
    let ne = work.edges.len();
    let spm = ShortestPathMap {
        complex: work.clone(),
        source: s,
        split,
        vertex_dist: vec![f64::INFINITY; nv],
        vertex_in: vec![VertexIn::Source; nv],
        ruffles: vec![None; nv],
        regions: Vec::new(),
        along: Vec::new(),
        edge_from: vec![Vec::new(); ne],
        face_edge_entries: Vec::new(),
        face_vertex_entries: Vec::new(),
        branches: Vec::new(),
        trees: Vec::new(),
        branch_visits: Vec::new(),
        conflicts: 0,
    };
    let mut b = Builder {
        c: &work,
        cap: region_cap,
        spm,
        reached: vec![None; nv],
        done: vec![false; nv],
        queue: VecDeque::new(),
        roots: Vec::new(),
        forks: HashMap::new(),
        links: vec![None; nv],
    };
    b.spm.vertex_dist[s] = 0.0;
    b.queue.push_back(Item::Vertex(s));
    while let Some(item) = b.queue.pop_front() {
        match item {
            Item::Vertex(v) => b.vertex(v)?,
            Item::Segment(f) => b.segment(f)?,
        }
    }
    if let Some(v) = (0..nv).find(|&v| !b.done[v]) {
        return Err(Error::Internal(format!("vertex {} never reached", work.vertices[v])));
    }
    debug!("spm: {} regions, {} lengthwise edges", b.spm.regions.len(), b.spm.along.len());
    Ok(b.spm)
}
