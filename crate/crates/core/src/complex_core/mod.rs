//! Finite 2D complexes of Euclidean triangles: construction, links, the CAT(0)
//! link condition, and isometric layout of face sequences.

pub mod link;

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{self, Iso2, P2};
pub use link::{Hop, LinkArc, LinkCycle, LinkGraph, LinkPath, LinkPoint};

/// Default absolute geometric tolerance.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
    pub length: f64,
}

/// A triangle with its canonical frame: `verts[0]` at the origin, `verts[1]` on
/// the positive x-axis, `verts[2]` above it.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: String,
    /// Edges as listed in the input; `edges[0]` runs from `verts[0]` to `verts[1]`.
    pub edges: [usize; 3],
    pub verts: [usize; 3],
    /// `opp[i]` is the edge not containing `verts[i]`.
    pub opp: [usize; 3],
    pub coords: [P2; 3],
    pub angles: [f64; 3],
}

impl Face {
    pub fn local(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }

    pub fn has_edge(&self, e: usize) -> bool {
        self.edges.contains(&e)
    }

    /// Local index of the vertex opposite edge `e`.
    pub fn opposite_of(&self, e: usize) -> Option<usize> {
        self.opp.iter().position(|&x| x == e)
    }

    /// The two edges at local vertex `i`, in counterclockwise order.
    pub fn edges_at(&self, i: usize) -> [usize; 2] {
        [self.opp[(i + 2) % 3], self.opp[(i + 1) % 3]]
    }

    pub fn centroid(&self) -> P2 {
        let [a, b, c] = self.coords;
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Barycentric containment test with absolute tolerance.
    pub fn contains(&self, p: P2, tol: f64) -> bool {
        let [a, b, c] = self.coords;
        let area = geom::orient(a, b, c);
        [(a, b), (b, c), (c, a)]
            .iter()
            .all(|&(u, v)| geom::orient(u, v, p) / geom::dist(u, v) >= -tol * area.signum())
    }
}

/// Input edge record.
#[derive(Debug, Clone)]
pub struct EdgeInfo {
    pub id: String,
    pub ends: [String; 2],
    pub length: f64,
}

/// Input face record.
#[derive(Debug, Clone)]
pub struct FaceInfo {
    pub id: String,
    pub edges: [String; 3],
}

/// Input rectangle record; edges are listed cyclically.
#[derive(Debug, Clone)]
pub struct RectInfo {
    pub id: String,
    pub edges: [String; 4],
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyComplex2D {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub edge_faces: Vec<Vec<usize>>,
    pub vertex_edges: Vec<Vec<usize>>,
    pub vertex_faces: Vec<Vec<usize>>,
    /// Rectangle ids and the rectangle each face came from, for rectangular input.
    pub rects: Vec<String>,
    pub face_rect: Vec<Option<usize>>,
    vindex: HashMap<String, usize>,
    eindex: HashMap<String, usize>,
    findex: HashMap<String, usize>,
}

fn index_of(ids: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut m = HashMap::new();
    for (i, id) in ids.iter().enumerate() {
        if m.insert(id.clone(), i).is_some() {
            return Err(Error::MalformedInput(format!("duplicate {what} id {id}")));
        }
    }
    Ok(m)
}

fn shared(a: [usize; 2], b: [usize; 2]) -> Vec<usize> {
    let mut s: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
    s.dedup();
    s
}

impl PolyComplex2D {
    pub fn new(vertices: Vec<String>, edges: Vec<EdgeInfo>, faces: Vec<FaceInfo>) -> Result<Self> {
        Self::assemble(vertices, edges, faces, Vec::new(), Vec::new())
    }

    /// Build from rectangles, splitting each along the diagonal from the corner
    /// shared by its last and first edges. Missing edge lengths are implied by
    /// the rectangle sides (`edges[0]`, `edges[2]` have the width).
    pub fn from_rects(vertices: Vec<String>, edges: Vec<(String, [String; 2], Option<f64>)>, rects: Vec<RectInfo>) -> Result<Self> {
        let vindex = index_of(&vertices, "vertex")?;
        let eids: Vec<String> = edges.iter().map(|e| e.0.clone()).collect();
        let eindex = index_of(&eids, "edge")?;
        let mut lengths: Vec<Option<f64>> = edges.iter().map(|e| e.2).collect();
        let mut ends = Vec::new();
        for e in &edges {
            let a = *vindex.get(&e.1[0]).ok_or_else(|| Error::MalformedInput(format!("unknown vertex {}", e.1[0])))?;
            let b = *vindex.get(&e.1[1]).ok_or_else(|| Error::MalformedInput(format!("unknown vertex {}", e.1[1])))?;
            ends.push([a, b]);
        }
        let mut tri_edges: Vec<EdgeInfo> = Vec::new();
        let mut faces = Vec::new();
        let mut face_rect = Vec::new();
        for (ri, r) in rects.iter().enumerate() {
            if !(r.width > 0.0 && r.height > 0.0) {
                return Err(Error::MalformedInput(format!("rect {} has nonpositive side", r.id)));
            }
            let mut ei = [0usize; 4];
            for k in 0..4 {
                ei[k] = *eindex
                    .get(&r.edges[k])
                    .ok_or_else(|| Error::MalformedInput(format!("rect {} references unknown edge {}", r.id, r.edges[k])))?;
                let want = if k % 2 == 0 { r.width } else { r.height };
                match lengths[ei[k]] {
                    None => lengths[ei[k]] = Some(want),
                    Some(l) if (l - want).abs() > TOL * want.max(1.0) => {
                        return Err(Error::MalformedInput(format!("edge {} length disagrees with rect {}", r.edges[k], r.id)))
                    }
                    _ => {}
                }
            }
            let mut corner = [0usize; 4];
            for k in 0..4 {
                let s = shared(ends[ei[(k + 3) % 4]], ends[ei[k]]);
                if s.len() != 1 {
                    return Err(Error::MalformedInput(format!("rect {} edges are not cyclic", r.id)));
                }
                corner[k] = s[0];
            }
            let did = format!("{}#d", r.id);
            tri_edges.push(EdgeInfo {
                id: did.clone(),
                ends: [vertices[corner[0]].clone(), vertices[corner[2]].clone()],
                length: r.width.hypot(r.height),
            });
            faces.push(FaceInfo { id: format!("{}#a", r.id), edges: [r.edges[0].clone(), r.edges[1].clone(), did.clone()] });
            faces.push(FaceInfo { id: format!("{}#b", r.id), edges: [r.edges[2].clone(), r.edges[3].clone(), did] });
            face_rect.push(Some(ri));
            face_rect.push(Some(ri));
        }
        let mut all: Vec<EdgeInfo> = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            let length = lengths[i].ok_or_else(|| Error::MalformedInput(format!("edge {} has no length", e.0)))?;
            all.push(EdgeInfo { id: e.0, ends: e.1, length });
        }
        all.extend(tri_edges);
        let ids = rects.into_iter().map(|r| r.id).collect();
        Self::assemble(vertices, all, faces, ids, face_rect)
    }

    fn assemble(vertices: Vec<String>, edges: Vec<EdgeInfo>, faces: Vec<FaceInfo>, rects: Vec<String>, face_rect: Vec<Option<usize>>) -> Result<Self> {
        let vindex = index_of(&vertices, "vertex")?;
        let eids: Vec<String> = edges.iter().map(|e| e.id.clone()).collect();
        let eindex = index_of(&eids, "edge")?;
        let fids: Vec<String> = faces.iter().map(|f| f.id.clone()).collect();
        let findex = index_of(&fids, "face")?;
        let mut es = Vec::with_capacity(edges.len());
        for e in edges {
            let mut ends = [0; 2];
            for k in 0..2 {
                ends[k] = *vindex
                    .get(&e.ends[k])
                    .ok_or_else(|| Error::MalformedInput(format!("edge {} references unknown vertex {}", e.id, e.ends[k])))?;
            }
            if ends[0] == ends[1] {
                return Err(Error::MalformedInput(format!("edge {} is a loop", e.id)));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::MalformedInput(format!("edge {} has nonpositive length", e.id)));
            }
            es.push(Edge { id: e.id, ends, length: e.length });
        }
        let mut fs = Vec::with_capacity(faces.len());
        for f in faces {
            let mut ei = [0; 3];
            for k in 0..3 {
                ei[k] = *eindex
                    .get(&f.edges[k])
                    .ok_or_else(|| Error::MalformedInput(format!("face {} references unknown edge {}", f.id, f.edges[k])))?;
            }
            fs.push(Self::make_face(&es, f.id, ei)?);
        }
        let nv = vertices.len();
        let mut edge_faces = vec![Vec::new(); es.len()];
        let mut vertex_edges = vec![Vec::new(); nv];
        let mut vertex_faces = vec![Vec::new(); nv];
        for (i, e) in es.iter().enumerate() {
            vertex_edges[e.ends[0]].push(i);
            vertex_edges[e.ends[1]].push(i);
        }
        for (i, f) in fs.iter().enumerate() {
            for &e in &f.edges {
                edge_faces[e].push(i);
            }
            for &v in &f.verts {
                vertex_faces[v].push(i);
            }
        }
        let face_rect = if face_rect.is_empty() { vec![None; fs.len()] } else { face_rect };
        let c = Self {
            vertices,
            edges: es,
            faces: fs,
            edge_faces,
            vertex_edges,
            vertex_faces,
            rects,
            face_rect,
            vindex,
            eindex,
            findex,
        };
        if !c.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(c)
    }

    fn make_face(es: &[Edge], id: String, ei: [usize; 3]) -> Result<Face> {
        let bad = || Error::MalformedInput(format!("face {id} edges do not form a triangle"));
        if ei[0] == ei[1] || ei[1] == ei[2] || ei[0] == ei[2] {
            return Err(bad());
        }
        let ends = |k: usize| es[ei[k]].ends;
        let mut pair = [0usize; 3];
        for (slot, (x, y)) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
            let s = shared(ends(x), ends(y));
            if s.len() != 1 {
                return Err(bad());
            }
            pair[slot] = s[0];
        }
        if pair[0] == pair[1] || pair[1] == pair[2] || pair[0] == pair[2] {
            return Err(bad());
        }
        let a = ends(0)[0];
        let b = ends(0)[1];
        let c = pair[1];
        let (ac, bc) = if ends(1).contains(&a) { (ei[1], ei[2]) } else { (ei[2], ei[1]) };
        let lab = es[ei[0]].length;
        let lac = es[ac].length;
        let lbc = es[bc].length;
        let strict = |x: f64, y: f64, z: f64| x + y > z * (1.0 + 1e-15);
        if !(strict(lab, lac, lbc) && strict(lab, lbc, lac) && strict(lac, lbc, lab)) {
            return Err(Error::TriangleInequality(id));
        }
        let alpha = geom::angle_from_sides(lab, lac, lbc);
        let beta = geom::angle_from_sides(lab, lbc, lac);
        let gamma = geom::angle_from_sides(lac, lbc, lab);
        Ok(Face {
            id,
            edges: ei,
            verts: [a, b, c],
            opp: [bc, ac, ei[0]],
            coords: [[0.0, 0.0], [lab, 0.0], geom::polar(lac, alpha)],
            angles: [alpha, beta, gamma],
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.vertex_edges[u] {
                let w = self.other_end(e, u);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vindex.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.eindex.get(id).copied()
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.findex.get(id).copied()
    }

    pub fn is_manifold(&self) -> bool {
        self.edge_faces.iter().all(|f| f.len() <= 2)
    }

    /// Index of `e` among the link nodes of `v`.
    pub fn link_node(&self, v: usize, e: usize) -> Option<usize> {
        self.vertex_edges[v].iter().position(|&x| x == e)
    }

    /// Index of `f` among the link arcs of `v`.
    pub fn link_arc(&self, v: usize, f: usize) -> Option<usize> {
        self.vertex_faces[v].iter().position(|&x| x == f)
    }

    /// Link graph at `v`: nodes are incident edges, arcs incident faces weighted
    /// by the interior angle. Arc offsets run counterclockwise in the face frame.
    pub fn link_graph(&self, v: usize) -> Result<LinkGraph> {
        if v >= self.vertices.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let arcs = self.vertex_faces[v]
            .iter()
            .map(|&f| {
                let face = &self.faces[f];
                let i = face.local(v).unwrap();
                let [e0, e1] = face.edges_at(i);
                LinkArc {
                    key: f,
                    ends: [self.link_node(v, e0).unwrap(), self.link_node(v, e1).unwrap()],
                    weight: face.angles[i],
                }
            })
            .collect();
        Ok(LinkGraph::new(Some(v), self.vertex_edges[v].clone(), arcs))
    }

    /// Canonical coordinates of vertex `v` in face `f`.
    pub fn vertex_pos(&self, f: usize, v: usize) -> Option<P2> {
        let face = &self.faces[f];
        face.local(v).map(|i| face.coords[i])
    }

    /// Canonical coordinates of the point at distance `t` from `ends[0]` of edge `e` in face `f`.
    pub fn edge_point(&self, f: usize, e: usize, t: f64) -> Option<P2> {
        let [a, b] = self.edges[e].ends;
        let pa = self.vertex_pos(f, a)?;
        let pb = self.vertex_pos(f, b)?;
        self.faces[f].has_edge(e).then(|| geom::lerp(pa, pb, t / self.edges[e].length))
    }

    /// Direction at `v` in face `f` toward canonical point `p`, as a link point.
    pub fn direction(&self, v: usize, f: usize, p: P2) -> Option<LinkPoint> {
        let face = &self.faces[f];
        let i = face.local(v)?;
        let arc = self.link_arc(v, f)?;
        let toward = face.coords[(i + 1) % 3];
        let o = face.coords[i];
        let ang = geom::angle_between(geom::sub(toward, o), geom::sub(p, o)).clamp(0.0, face.angles[i]);
        Some(LinkPoint::Arc { arc, offset: ang })
    }

    pub fn faces_of(&self, loc: &Location) -> Vec<usize> {
        match *loc {
            Location::Vertex(v) => self.vertex_faces[v].clone(),
            Location::Edge { edge, .. } => self.edge_faces[edge].clone(),
            Location::Face { face, .. } => vec![face],
        }
    }

    /// Canonical coordinates of `loc` in face `f`, when `f` contains it.
    pub fn pos_in_face(&self, loc: &Location, f: usize) -> Option<P2> {
        match *loc {
            Location::Vertex(v) => self.vertex_pos(f, v),
            Location::Edge { edge, t } => self.edge_point(f, edge, t),
            Location::Face { face, p } => (face == f).then_some(p),
        }
    }

    /// Snap a face point lying on the boundary to its edge or vertex.
    pub fn canonical_location(&self, loc: Location, tol: f64) -> Location {
        match loc {
            Location::Face { face, p } => {
                let fc = &self.faces[face];
                for i in 0..3 {
                    if geom::dist(p, fc.coords[i]) <= tol {
                        return Location::Vertex(fc.verts[i]);
                    }
                }
                for &e in &fc.edges {
                    let [a, b] = self.edges[e].ends;
                    let pa = self.vertex_pos(face, a).unwrap();
                    let pb = self.vertex_pos(face, b).unwrap();
                    if geom::point_segment_distance(p, pa, pb) <= tol {
                        let t = geom::dot(geom::sub(p, pa), geom::sub(pb, pa)) / self.edges[e].length;
                        return Location::Edge { edge: e, t: t.clamp(0.0, self.edges[e].length) };
                    }
                }
                loc
            }
            Location::Edge { edge, t } => {
                let l = self.edges[edge].length;
                if t <= tol {
                    Location::Vertex(self.edges[edge].ends[0])
                } else if t >= l - tol {
                    Location::Vertex(self.edges[edge].ends[1])
                } else {
                    loc
                }
            }
            v => v,
        }
    }

    pub fn validate_location(&self, loc: &Location) -> Result<()> {
        let ok = match *loc {
            Location::Vertex(v) => v < self.vertices.len(),
            Location::Edge { edge, t } => edge < self.edges.len() && (0.0..=self.edges[edge].length).contains(&t),
            Location::Face { face, p } => face < self.faces.len() && self.faces[face].contains(p, TOL),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownLocation(format!("{loc:?}")))
        }
    }
}

/// A point of the complex in intrinsic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Location {
    Vertex(usize),
    /// Distance `t` from `ends[0]`.
    Edge { edge: usize, t: f64 },
    /// Canonical face coordinates.
    Face { face: usize, p: P2 },
}

/// A face point in canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FacePoint {
    pub face: usize,
    pub x: f64,
    pub y: f64,
}

impl From<FacePoint> for Location {
    fn from(f: FacePoint) -> Self {
        Location::Face { face: f.face, p: [f.x, f.y] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Cat0Violation {
    /// A link cycle shorter than 2π at `vertex`, given by its faces.
    ShortCycle { vertex: usize, length: f64, faces: Vec<usize> },
    /// The 1-skeleton has cycles not bounded by faces.
    NontrivialH1 { cycle_rank: usize, boundary_rank_mod2: usize, boundary_rank_modp: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cat0Report {
    pub ok: bool,
    pub violations: Vec<Cat0Violation>,
}

const RANK_PRIME: u64 = 2_147_483_647;

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][c]);
        for v in rows[rank].iter_mut() {
            *v = *v * iv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..ncols {
                    let sub = f * rows[rank][k] % p;
                    rows[r][k] = (rows[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the face-boundary map over GF(2) and a large prime field.
pub fn boundary_ranks(c: &PolyComplex2D) -> (usize, usize) {
    let ne = c.edges.len();
    let mut m2 = Vec::new();
    let mut mp = Vec::new();
    for f in &c.faces {
        let mut r2 = vec![0u64; ne];
        let mut rp = vec![0u64; ne];
        let cyc = [(f.verts[0], f.verts[1]), (f.verts[1], f.verts[2]), (f.verts[2], f.verts[0])];
        for (k, &(u, w)) in cyc.iter().enumerate() {
            let e = f.opp[(k + 2) % 3];
            r2[e] ^= 1;
            let forward = c.edges[e].ends == [u, w];
            rp[e] = if forward { 1 } else { RANK_PRIME - 1 };
        }
        m2.push(r2);
        mp.push(rp);
    }
    (rank_mod(m2, 2), rank_mod(mp, RANK_PRIME))
}

/// Link condition at every vertex plus the connectivity and first-homology proxy
/// for simple connectivity. Single-vertex cone complexes skip the proxy.
pub fn validate_cat0(c: &PolyComplex2D) -> Cat0Report {
    let mut violations = Vec::new();
    for v in 0..c.vertices.len() {
        let g = c.link_graph(v).expect("vertex in range");
        if let Some(cyc) = g.shortest_cycle() {
            if cyc.length < 2.0 * PI - TOL {
                violations.push(Cat0Violation::ShortCycle {
                    vertex: v,
                    length: cyc.length,
                    faces: cyc.arcs.iter().map(|&a| g.arcs[a].key).collect(),
                });
            }
        }
    }
    let cycle_rank = c.edges.len() + 1 - c.vertices.len();
    let (r2, rp) = boundary_ranks(c);
    if r2 != cycle_rank || rp != cycle_rank {
        violations.push(Cat0Violation::NontrivialH1 { cycle_rank, boundary_rank_mod2: r2, boundary_rank_modp: rp });
    }
    Cat0Report { ok: violations.is_empty(), violations }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarLayout {
    pub faces: Vec<usize>,
    /// Maps each face's canonical frame into the common plane.
    pub placements: Vec<Iso2>,
}

impl PlanarLayout {
    pub fn place(&self, c: &PolyComplex2D, k: usize, v: usize) -> P2 {
        self.placements[k].apply(c.vertex_pos(self.faces[k], v).unwrap())
    }
}

/// Lay out a face sequence so consecutive faces meet along the listed edges
/// from opposite sides.
pub fn unfold(c: &PolyComplex2D, faces: &[usize], shared_edges: &[usize]) -> Result<PlanarLayout> {
    if faces.is_empty() || shared_edges.len() + 1 != faces.len() {
        return Err(Error::MalformedInput("face/edge sequence lengths disagree".into()));
    }
    let mut placements = vec![Iso2::IDENTITY];
    for k in 1..faces.len() {
        let (f0, f1, e) = (faces[k - 1], faces[k], shared_edges[k - 1]);
        if !c.faces[f0].has_edge(e) || !c.faces[f1].has_edge(e) {
            return Err(Error::NotAdjacent(c.faces[f0].id.clone(), c.faces[f1].id.clone(), c.edges[e].id.clone()));
        }
        placements.push(glue(c, placements[k - 1], f0, f1, e));
    }
    Ok(PlanarLayout { faces: faces.to_vec(), placements })
}

/// Placement of `f1` glued to the placed face `f0` across edge `e`.
pub fn glue(c: &PolyComplex2D, prev: Iso2, f0: usize, f1: usize, e: usize) -> Iso2 {
    let [a, b] = c.edges[e].ends;
    let pa = prev.apply(c.vertex_pos(f0, a).unwrap());
    let pb = prev.apply(c.vertex_pos(f0, b).unwrap());
    let far0 = prev.apply(c.faces[f0].coords[c.faces[f0].opposite_of(e).unwrap()]);
    let qa = c.vertex_pos(f1, a).unwrap();
    let qb = c.vertex_pos(f1, b).unwrap();
    let far1 = c.faces[f1].coords[c.faces[f1].opposite_of(e).unwrap()];
    let side0 = geom::orient(pa, pb, far0).signum();
    for reflect in [false, true] {
        let m = Iso2::from_segments(qa, qb, pa, pb, reflect);
        if geom::orient(pa, pb, m.apply(far1)).signum() != side0 {
            return m;
        }
    }
    unreachable!("one of the two motions puts the face on the far side")
}

/// A path through the complex as a polyline of locations, straight within faces.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub waypoints: Vec<Location>,
    /// Face containing each segment (`waypoints.len() − 1` entries).
    pub segment_faces: Vec<usize>,
    pub length: f64,
}

impl GeodesicPath {
    pub fn trivial(at: Location) -> Self {
        Self { waypoints: vec![at], segment_faces: Vec::new(), length: 0.0 }
    }

    /// The point at arclength fraction `s ∈ [0, 1]`.
    pub fn sample(&self, c: &PolyComplex2D, s: f64) -> Location {
        let target = s.clamp(0.0, 1.0) * self.length;
        let mut acc = 0.0;
        for (k, &f) in self.segment_faces.iter().enumerate() {
            let p = c.pos_in_face(&self.waypoints[k], f).unwrap();
            let q = c.pos_in_face(&self.waypoints[k + 1], f).unwrap();
            let l = geom::dist(p, q);
            if acc + l >= target || k + 1 == self.segment_faces.len() {
                let t = if l > 0.0 { ((target - acc) / l).clamp(0.0, 1.0) } else { 0.0 };
                return Location::Face { face: f, p: geom::lerp(p, q, t) };
            }
            acc += l;
        }
        self.waypoints[0]
    }
}

/// CAT(0) comparison inequality along the side `bc` of triangle `abc`.
pub fn cat0_sample_check<F>(c: &PolyComplex2D, a: Location, b: Location, cc: Location, oracle: F, samples: usize) -> Result<bool>
where
    F: Fn(&Location, &Location) -> Result<GeodesicPath>,
{
    let ab = oracle(&a, &b)?.length;
    let ac = oracle(&a, &cc)?.length;
    let bc_path = oracle(&b, &cc)?;
    let bc = bc_path.length;
    for k in 0..=samples {
        let s = k as f64 / samples.max(1) as f64;
        let y = bc_path.sample(c, s);
        let dy = oracle(&y, &a)?.length;
        // Stewart's theorem in the comparison triangle.
        let cmp2 = (1.0 - s) * ab * ab + s * ac * ac - s * (1.0 - s) * bc * bc;
        if dy > cmp2.max(0.0).sqrt() + TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(id: &str, a: &str, b: &str, l: f64) -> EdgeInfo {
        EdgeInfo { id: id.into(), ends: [a.into(), b.into()], length: l }
    }

    fn f(id: &str, es: [&str; 3]) -> FaceInfo {
        FaceInfo { id: id.into(), edges: es.map(String::from) }
    }

    fn vs(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn equilateral_triangle() {
        let c = PolyComplex2D::new(
            vs(&["a", "b", "c"]),
            vec![e("ab", "a", "b", 1.0), e("bc", "b", "c", 1.0), e("ca", "c", "a", 1.0)],
            vec![f("t", ["ab", "bc", "ca"])],
        )
        .unwrap();
        assert_eq!((c.vertices.len(), c.edges.len(), c.faces.len()), (3, 3, 1));
        let g = c.link_graph(0).unwrap();
        assert_eq!(g.arcs.len(), 1);
        assert!((g.arcs[0].weight - PI / 3.0).abs() < 1e-15);
        let s: f64 = c.faces[0].angles.iter().sum();
        assert!((s - PI).abs() < 1e-12);
        assert!(c.faces[0].coords[2][1] > 0.0);
    }

    #[test]
    fn unknown_edge_is_malformed() {
        let r = PolyComplex2D::new(vs(&["a", "b", "c"]), vec![e("ab", "a", "b", 1.0)], vec![f("t", ["ab", "bc", "ca"])]);
        assert!(matches!(r, Err(Error::MalformedInput(_))));
    }

    #[test]
    fn impossible_sides_rejected() {
        let r = PolyComplex2D::new(
            vs(&["a", "b", "c"]),
            vec![e("ab", "a", "b", 1.0), e("bc", "b", "c", 1.0), e("ca", "c", "a", 3.0)],
            vec![f("t", ["ab", "bc", "ca"])],
        );
        assert!(matches!(r, Err(Error::TriangleInequality(_))));
    }

    #[test]
    fn isolated_vertex_disconnected() {
        let r = PolyComplex2D::new(
            vs(&["a", "b", "c", "z"]),
            vec![e("ab", "a", "b", 1.0), e("bc", "b", "c", 1.0), e("ca", "c", "a", 1.0)],
            vec![f("t", ["ab", "bc", "ca"])],
        );
        assert_eq!(r.unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn rectangle_split_keeps_back_map() {
        let c = PolyComplex2D::from_rects(
            vs(&["p", "q", "r", "s"]),
            vec![
                ("e0".into(), ["p".into(), "q".into()], None),
                ("e1".into(), ["q".into(), "r".into()], None),
                ("e2".into(), ["r".into(), "s".into()], None),
                ("e3".into(), ["s".into(), "p".into()], None),
            ],
            vec![RectInfo { id: "R".into(), edges: ["e0", "e1", "e2", "e3"].map(String::from), width: 2.0, height: 1.0 }],
        )
        .unwrap();
        assert_eq!(c.faces.len(), 2);
        assert_eq!(c.face_rect, vec![Some(0), Some(0)]);
        let d = c.edge_index("R#d").unwrap();
        assert!((c.edges[d].length - 5f64.sqrt()).abs() < 1e-15);
        assert!(validate_cat0(&c).ok);
    }
}
