//! The last-step map: for every vertex, edge and face, the last vertex, edge
//! or face its geodesics pass before arriving. Paths are recovered by walking
//! these tags backwards and unfolding.

use serde::Serialize;

use super::{ShortestPathMap, VertexIn};
use crate::complex_core::{glue, GeodesicPath, Location, PolyComplex2D, TOL};
use crate::error::{Error, Result};
use crate::geom::{self, Iso2, P2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeIn {
    /// Traversed lengthwise from this vertex.
    Along(usize),
    /// Crossed from this face.
    Face(usize),
    Unreached,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceType {
    E,
    V,
    EV,
    EVE,
}

/// Entry data of one face. `edges` are entry edges; for `EVE` the first is the
/// edge on the low-offset side of `vertex`. `rays` are dividing-ray offsets at
/// the `vertex` corner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceEntry {
    pub ty: Option<FaceType>,
    pub vertex: Option<usize>,
    pub edges: Vec<usize>,
    pub rays: Vec<f64>,
    /// Sector `[lo, hi]` at `vertex` reached through it.
    pub sector: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LastStepMap {
    pub complex: PolyComplex2D,
    pub source: usize,
    pub split: super::SourceSplit,
    pub vertex_in: Vec<VertexIn>,
    pub vertex_dist: Vec<f64>,
    pub edge_in: Vec<EdgeIn>,
    pub faces: Vec<FaceEntry>,
    /// Entry-lemma violations found while deriving, as messages.
    pub problems: Vec<String>,
}

impl LastStepMap {
    /// Stored items: one tag per vertex and edge, plus per face its type, entry
    /// refs and dividing rays.
    pub fn size(&self) -> usize {
        let faces: usize = self.faces.iter().map(|f| 1 + f.edges.len() + f.vertex.is_some() as usize + f.rays.len()).sum();
        faces + self.edge_in.len() + self.vertex_in.len()
    }

    pub fn locate(&self, original: &Location) -> Result<Location> {
        self.split.locate(&self.complex, original)
    }
}

fn classify(spm: &ShortestPathMap, f: usize) -> (FaceEntry, Vec<String>) {
    let c = &spm.complex;
    let face = &c.faces[f];
    let mut edges: Vec<usize> = spm.face_edge_entries.iter().filter(|x| x.0 == f).map(|x| x.1).collect();
    edges.sort_unstable();
    edges.dedup();
    let sectors: Vec<(usize, f64, f64)> = spm.face_vertex_entries.iter().filter(|x| x.0 == f).map(|x| (x.1, x.2, x.3)).collect();
    let mut problems = Vec::new();
    let mut entry = FaceEntry { ty: None, vertex: None, edges: Vec::new(), rays: Vec::new(), sector: None };
    let wide: Vec<&(usize, f64, f64)> = sectors.iter().filter(|s| s.2 > s.1).collect();
    if wide.len() > 1 || (wide.is_empty() && sectors.len() > 1 && edges.len() == 2) {
        problems.push(format!("face {} entered through {} vertices", face.id, sectors.len()));
        return (entry, problems);
    }
    let corner = |v: usize| face.local(v).map(|i| (i, face.edges_at(i), face.angles[i]));
    match (edges.len(), wide.first()) {
        (0, Some(&&(u, lo, hi))) => {
            entry.ty = Some(FaceType::V);
            entry.vertex = Some(u);
            entry.sector = Some((lo, hi));
            let (_, _, w) = corner(u).unwrap();
            if lo > TOL || hi < w - TOL {
                problems.push(format!("face {} only partly reached from vertex {}", face.id, c.vertices[u]));
            }
        }
        (1, None) => {
            entry.ty = Some(FaceType::E);
            entry.edges = edges;
        }
        (1, Some(&&(u, lo, hi))) => {
            let (_, at, w) = corner(u).unwrap();
            let e = edges[0];
            let ok = (e == at[0] && hi >= w - TOL) || (e == at[1] && lo <= TOL);
            if !ok {
                problems.push(format!("face {}: entry edge {} does not meet the sector of vertex {}", face.id, c.edges[e].id, c.vertices[u]));
            }
            entry.ty = Some(FaceType::EV);
            entry.vertex = Some(u);
            entry.edges = edges;
            entry.sector = Some((lo, hi));
            entry.rays = if e == at[0] { vec![lo] } else { vec![hi] };
        }
        (2, _) => {
            let common = c.edges[edges[0]].ends.iter().copied().find(|v| c.edges[edges[1]].ends.contains(v));
            let sector = common.and_then(|u| sectors.iter().find(|s| s.0 == u).copied());
            match (common, sector) {
                (Some(u), Some((_, lo, hi))) => {
                    let (_, at, _) = corner(u).unwrap();
                    entry.ty = Some(FaceType::EVE);
                    entry.vertex = Some(u);
                    entry.edges = if edges[0] == at[0] { edges } else { vec![edges[1], edges[0]] };
                    entry.sector = Some((lo, hi));
                    entry.rays = if hi > lo { vec![lo, hi] } else { vec![lo] };
                }
                (Some(u), None) => problems.push(format!("face {}: no dividing ray at vertex {}", face.id, c.vertices[u])),
                (None, _) => problems.push(format!("face {}: entry edges share no vertex", face.id)),
            }
        }
        (0, None) => problems.push(format!("face {} never reached", face.id)),
        (k, _) => problems.push(format!("face {} entered through {k} edges", face.id)),
    }
    (entry, problems)
}

fn edge_tag(spm: &ShortestPathMap, e: usize) -> (EdgeIn, Vec<String>) {
    let c = &spm.complex;
    let along: Vec<usize> = spm.along.iter().filter(|x| x.0 == e).map(|x| x.1).collect();
    let from = &spm.edge_from[e];
    let mut problems = Vec::new();
    if along.len() + from.len() > 1 {
        let mut who: Vec<String> = along.iter().map(|&v| format!("vertex {}", c.vertices[v])).collect();
        who.extend(from.iter().map(|&f| format!("face {}", c.faces[f].id)));
        problems.push(format!("edge {} reached from {}", c.edges[e].id, who.join(" and ")));
    }
    let tag = match (along.first(), from.first()) {
        (Some(&v), _) => EdgeIn::Along(v),
        (None, Some(&f)) => EdgeIn::Face(f),
        (None, None) => EdgeIn::Unreached,
    };
    if tag == EdgeIn::Unreached {
        problems.push(format!("edge {} never reached", c.edges[e].id));
    }
    (tag, problems)
}

/// Derive the last-step map in time linear in the map size.
pub fn derive_last_step(spm: &ShortestPathMap) -> LastStepMap {
    let c = &spm.complex;
    let mut problems = Vec::new();
    let edge_in = (0..c.edges.len())
        .map(|e| {
            let (t, p) = edge_tag(spm, e);
            problems.extend(p);
            t
        })
        .collect();
    let faces = (0..c.faces.len())
        .map(|f| {
            let (t, p) = classify(spm, f);
            problems.extend(p);
            t
        })
        .collect();
    LastStepMap {
        complex: c.clone(),
        source: spm.source,
        split: spm.split.clone(),
        vertex_in: spm.vertex_in.clone(),
        vertex_dist: spm.vertex_dist.clone(),
        edge_in,
        faces,
        problems,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub ok: bool,
    pub edges_checked: usize,
    pub faces_checked: usize,
    pub violations: Vec<String>,
}

/// Check that every edge has one incoming tag and every face one of the four entry types.
pub fn verify_entry_lemmas(spm: &ShortestPathMap) -> LemmaReport {
    let lsm = derive_last_step(spm);
    LemmaReport {
        ok: lsm.problems.is_empty(),
        edges_checked: lsm.edge_in.len(),
        faces_checked: lsm.faces.len(),
        violations: lsm.problems,
    }
}

enum Via {
    Vertex(usize),
    Edge(usize),
}

/// Offset at `u`'s corner of `f` of the direction toward face-frame point `p`.
fn corner_offset(c: &PolyComplex2D, f: usize, u: usize, p: P2) -> f64 {
    let face = &c.faces[f];
    let i = face.local(u).unwrap();
    geom::angle_between(geom::sub(face.coords[(i + 1) % 3], face.coords[i]), geom::sub(p, face.coords[i]))
}

fn via(lsm: &LastStepMap, f: usize, p: P2) -> Result<Via> {
    let entry = &lsm.faces[f];
    let c = &lsm.complex;
    let bad = || Error::Internal(format!("face {} has no entry type", c.faces[f].id));
    Ok(match entry.ty.ok_or_else(bad)? {
        FaceType::V => Via::Vertex(entry.vertex.unwrap()),
        FaceType::E => Via::Edge(entry.edges[0]),
        FaceType::EV | FaceType::EVE => {
            let u = entry.vertex.unwrap();
            let (lo, hi) = entry.sector.unwrap();
            let th = corner_offset(c, f, u, p);
            let slack = 1e-12;
            if th >= lo - slack && th <= hi + slack {
                Via::Vertex(u)
            } else if entry.ty == Some(FaceType::EV) {
                Via::Edge(entry.edges[0])
            } else if th < lo {
                Via::Edge(entry.edges[0])
            } else {
                Via::Edge(entry.edges[1])
            }
        }
    })
}

/// Straight final leg into face `f` toward face-frame point `p`: the apex
/// vertex, the crossed edges with their crossing points, and the face sequence.
fn final_leg(lsm: &LastStepMap, f: usize, p: P2) -> Result<(usize, Vec<Location>, Vec<usize>)> {
    let c = &lsm.complex;
    let mut face = f;
    // Placement of the current face in `f`'s frame.
    let mut m = Iso2::IDENTITY;
    let mut crossed: Vec<(usize, Iso2, usize)> = Vec::new();
    let limit = 4 * (c.faces.len() + 1);
    loop {
        let target = m.inverse().apply(p);
        match via(lsm, face, target)? {
            Via::Vertex(u) => {
                let apex = m.apply(c.vertex_pos(face, u).unwrap());
                let mut locs = Vec::new();
                let mut faces = vec![face];
                for &(e, mm, fwd) in crossed.iter().rev() {
                    let [a, b] = c.edges[e].ends;
                    let (pa, pb) = (mm.apply(c.vertex_pos(fwd, a).unwrap()), mm.apply(c.vertex_pos(fwd, b).unwrap()));
                    let t = geom::ray_line(apex, geom::sub(p, apex), pa, pb).map_or(0.5, |(_, s)| s.clamp(0.0, 1.0));
                    locs.push(c.canonical_location(Location::Edge { edge: e, t: t * c.edges[e].length }, 1e-12));
                    faces.push(fwd);
                }
                return Ok((u, locs, faces));
            }
            Via::Edge(e) => match lsm.edge_in[e] {
                EdgeIn::Face(g) => {
                    let mg = glue(c, m, face, g, e);
                    crossed.push((e, m, face));
                    face = g;
                    m = mg;
                    if crossed.len() > limit {
                        return Err(Error::Internal("last-step walk does not terminate".into()));
                    }
                }
                other => {
                    return Err(Error::Internal(format!("face entry edge {} has incoming tag {other:?}", c.edges[e].id)))
                }
            },
        }
    }
}

fn append(path: &mut GeodesicPath, c: &PolyComplex2D, locs: Vec<Location>, faces: Vec<usize>) {
    for (loc, f) in locs.into_iter().zip(faces) {
        let prev = *path.waypoints.last().unwrap();
        let (Some(a), Some(b)) = (c.pos_in_face(&prev, f), c.pos_in_face(&loc, f)) else { continue };
        if geom::dist(a, b) <= 1e-15 && prev == loc {
            continue;
        }
        path.length += geom::dist(a, b);
        path.waypoints.push(loc);
        path.segment_faces.push(f);
    }
}

fn vertex_path(lsm: &LastStepMap, v: usize, depth: usize) -> Result<GeodesicPath> {
    let c = &lsm.complex;
    if depth > c.vertices.len() + 1 {
        return Err(Error::Internal("vertex chain does not terminate".into()));
    }
    match lsm.vertex_in[v] {
        VertexIn::Source => Ok(GeodesicPath::trivial(Location::Vertex(v))),
        VertexIn::Edge(e) => {
            let w = c.other_end(e, v);
            let mut path = vertex_path(lsm, w, depth + 1)?;
            append(&mut path, c, vec![Location::Vertex(v)], vec![c.edge_faces[e][0]]);
            Ok(path)
        }
        VertexIn::Face { face, .. } => {
            let p = c.vertex_pos(face, v).unwrap();
            let (u, mut locs, mut faces) = final_leg(lsm, face, p)?;
            let mut path = vertex_path(lsm, u, depth + 1)?;
            locs.push(Location::Vertex(v));
            faces.truncate(locs.len());
            append(&mut path, c, locs, faces);
            Ok(path)
        }
    }
}

fn face_point_path(lsm: &LastStepMap, f: usize, p: P2, t: Location) -> Result<GeodesicPath> {
    let c = &lsm.complex;
    let (u, mut locs, mut faces) = final_leg(lsm, f, p)?;
    let mut path = vertex_path(lsm, u, 0)?;
    locs.push(t);
    faces.truncate(locs.len());
    append(&mut path, c, locs, faces);
    Ok(path)
}

/// The geodesic from the source to `t`, given in working-complex coordinates.
pub fn query_path(lsm: &LastStepMap, t: &Location) -> Result<GeodesicPath> {
    let c = &lsm.complex;
    c.validate_location(t)?;
    match c.canonical_location(*t, 1e-12) {
        Location::Vertex(v) => vertex_path(lsm, v, 0),
        Location::Edge { edge, t: x } => match lsm.edge_in[edge] {
            EdgeIn::Along(w) => {
                let mut path = vertex_path(lsm, w, 0)?;
                append(&mut path, c, vec![Location::Edge { edge, t: x }], vec![c.edge_faces[edge][0]]);
                Ok(path)
            }
            EdgeIn::Face(g) => face_point_path(lsm, g, c.edge_point(g, edge, x).unwrap(), Location::Edge { edge, t: x }),
            EdgeIn::Unreached => {
                let f = c.edge_faces[edge][0];
                face_point_path(lsm, f, c.edge_point(f, edge, x).unwrap(), Location::Edge { edge, t: x })
            }
        },
        loc @ Location::Face { face, p } => face_point_path(lsm, face, p, loc),
    }
}

/// Outcome of propagating incoming information outward in dependency order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveReport {
    pub resolved: usize,
    pub stalled: usize,
    /// A dependency cycle among stalled items, as `face:<id>` / `edge:<id>` labels.
    pub cycle: Vec<String>,
    /// Faces of type EVE on the cycle.
    pub eve_on_cycle: usize,
}

/// Resolve items only once everything they depend on is resolved: a face
/// waits for its entry edges and vertex, an edge for its incoming face or
/// vertex, a vertex for its incoming edge or face.
pub fn naive_propagation(lsm: &LastStepMap) -> NaiveReport {
    let c = &lsm.complex;
    let (nv, ne, nf) = (c.vertices.len(), c.edges.len(), c.faces.len());
    // Items: vertices, then edges, then faces.
    let (ve, ef) = (nv, nv + ne);
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); nv + ne + nf];
    for v in 0..nv {
        match lsm.vertex_in[v] {
            VertexIn::Source => {}
            VertexIn::Edge(e) => deps[v].push(ve + e),
            VertexIn::Face { face, .. } => deps[v].push(ef + face),
        }
    }
    for e in 0..ne {
        match lsm.edge_in[e] {
            EdgeIn::Along(w) => deps[ve + e].push(w),
            EdgeIn::Face(f) => deps[ve + e].push(ef + f),
            EdgeIn::Unreached => {}
        }
    }
    for (f, entry) in lsm.faces.iter().enumerate() {
        deps[ef + f].extend(entry.edges.iter().map(|&e| ve + e));
        deps[ef + f].extend(entry.vertex);
    }
    let n = deps.len();
    let mut waiting: Vec<usize> = deps.iter().map(|d| d.len()).collect();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, d) in deps.iter().enumerate() {
        for &j in d {
            users[j].push(i);
        }
    }
    let mut done = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| waiting[i] == 0).collect();
    while let Some(i) = stack.pop() {
        if done[i] {
            continue;
        }
        done[i] = true;
        for &u in &users[i] {
            waiting[u] -= 1;
            if waiting[u] == 0 {
                stack.push(u);
            }
        }
    }
    let label = |i: usize| {
        if i < ve {
            format!("vertex:{}", c.vertices[i])
        } else if i < ef {
            format!("edge:{}", c.edges[i - ve].id)
        } else {
            format!("face:{}", c.faces[i - ef].id)
        }
    };
    let mut cycle = Vec::new();
    if let Some(start) = (0..n).find(|&i| !done[i]) {
        // Every stalled item waits on a stalled item, so walking forward repeats.
        let mut order = vec![start];
        let mut at = start;
        loop {
            at = *deps[at].iter().find(|&&j| !done[j]).unwrap();
            if let Some(k) = order.iter().position(|&x| x == at) {
                cycle = order[k..].to_vec();
                break;
            }
            order.push(at);
        }
    }
    let eve_on_cycle = cycle.iter().filter(|&&i| i >= ef && lsm.faces[i - ef].ty == Some(FaceType::EVE)).count();
    NaiveReport {
        resolved: done.iter().filter(|&&d| d).count(),
        stalled: done.iter().filter(|&&d| !d).count(),
        cycle: cycle.into_iter().map(label).collect(),
        eve_on_cycle,
    }
}
