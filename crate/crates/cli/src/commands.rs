//! Subcommand implementations. Each returns the JSON document to print.

use std::f64::consts::PI;
use std::fmt::Display;
use std::io::Read;

use log::{debug, info};
use serde_json::{json, Value};

use cat0_core::complex_core::{validate_cat0, Cat0Report, Cat0Violation, GeodesicPath, LinkGraph, Location, PolyComplex2D};
use cat0_core::error::Error;
use cat0_core::hull_lp::{iterative_hull_oracle, peel, solve_hull_with, Arith, HullOptions, PeelStop};
use cat0_core::io::{self, Bundle, Point, Space};
use cat0_core::single_vertex::{geodesic, link_distance, ConePoint, LinkDist, SingleVertexComplex};
use cat0_core::spm::{branch_counts, build_spm, derive_last_step, query_path, verify_entry_lemmas, EdgeIn, LastStepMap};
use cat0_core::treespace::girth;

use crate::{svg, ArithArg, Cli, Command};

pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { kind: e.kind().into(), message: e.to_string() }
    }
}

pub fn fail(kind: &str, msg: impl Display) -> Failure {
    Failure { kind: kind.into(), message: msg.to_string() }
}

type Out = Result<Value, Failure>;

fn read_text(path: Option<&std::path::Path>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| fail("Io", format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| fail("Io", e))?;
            Ok(s)
        }
    }
}

fn load(cli: &Cli) -> Result<Bundle, Failure> {
    let mut b = io::parse_bundle(&io::parse_json(&read_text(cli.input.as_deref())?)?)?;
    if let Some(p) = &cli.points {
        let extra = io::parse_points(&b.space, &io::parse_json(&read_text(Some(p))?)?)?;
        b.points.extend(extra);
    }
    info!("loaded {} points and {} probes", b.points.len(), b.probes.len());
    Ok(b)
}

/// A point by name, or inline point JSON.
fn resolve(b: &Bundle, s: &str) -> Result<(String, Point), Failure> {
    if let Some(p) = b.named(s) {
        return Ok((s.to_string(), p));
    }
    if s.trim_start().starts_with('{') {
        let p = io::parse_point(&b.space, &io::parse_json(s)?)?;
        return Ok((s.to_string(), p));
    }
    Err(Error::MalformedInput(format!("no point named {s:?}")).into())
}

/// Explicit points, or else the first `n` named points.
fn pick(b: &Bundle, given: &[String], n: usize) -> Result<Vec<(String, Point)>, Failure> {
    if !given.is_empty() {
        if given.len() != n {
            return Err(usage(format!("expected {n} --point arguments")));
        }
        return given.iter().map(|s| resolve(b, s)).collect();
    }
    if b.points.len() < n {
        return Err(usage(format!("need {n} points")));
    }
    Ok(b.points[..n].to_vec())
}

fn usage(msg: impl Display) -> Failure {
    fail("Usage", msg)
}

fn cone(b: &Bundle) -> Result<&SingleVertexComplex, Failure> {
    match &b.space {
        Space::Cone(c) => Ok(c),
        Space::Complex(_) => Err(Error::Domain("this command needs a single_vertex complex".into()).into()),
    }
}

fn complex(b: &Bundle) -> Result<&PolyComplex2D, Failure> {
    match &b.space {
        Space::Complex(c) => Ok(c),
        Space::Cone(_) => Err(Error::Domain("this command needs a triangulated or rectangular complex".into()).into()),
    }
}

fn as_cone(p: &Point) -> ConePoint {
    match p {
        Point::Cone(q) => *q,
        Point::Complex(_) => unreachable!("points match their space"),
    }
}

fn as_loc(p: &Point) -> Location {
    match p {
        Point::Complex(l) => *l,
        Point::Cone(_) => unreachable!("points match their space"),
    }
}

fn points_of(b: &Bundle) -> Vec<ConePoint> {
    b.points.iter().map(|(_, p)| as_cone(p)).collect()
}

/// `pπ/q` when `x` is a small rational multiple of π.
pub fn pi_fraction(x: f64) -> String {
    for q in 1..=12i64 {
        let p = x / PI * q as f64;
        if (p - p.round()).abs() < 1e-9 && p.round() != 0.0 {
            let p = p.round() as i64;
            let num = if p == 1 { "π".to_string() } else { format!("{p}π") };
            return if q == 1 { num } else { format!("{num}/{q}") };
        }
    }
    io::format_g12(x)
}

fn link_stats(g: &LinkGraph) -> Value {
    let degrees: Vec<usize> = (0..g.nodes.len()).map(|n| g.degree(n)).collect();
    let regular = degrees.first().filter(|&&d| degrees.iter().all(|&x| x == d));
    let cycle = g.shortest_cycle();
    json!({
        "nodes": g.nodes.len(),
        "arcs": g.arcs.len(),
        "regular": regular,
        "girth": girth(g),
        "girth_weight": cycle.as_ref().map(|c| pi_fraction(c.length)),
        "girth_weight_rad": cycle.as_ref().map(|c| c.length),
    })
}

fn violations_json(r: &Cat0Report, vertex: impl Fn(usize) -> String, face: impl Fn(usize) -> String) -> Value {
    r.violations
        .iter()
        .map(|v| match v {
            Cat0Violation::ShortCycle { vertex: x, length, faces } => json!({
                "type": "short_cycle",
                "vertex": vertex(*x),
                "length": length,
                "faces": faces.iter().map(|&f| face(f)).collect::<Vec<_>>(),
            }),
            Cat0Violation::NontrivialH1 { cycle_rank, boundary_rank_mod2, boundary_rank_modp } => json!({
                "type": "nontrivial_h1",
                "cycle_rank": cycle_rank,
                "boundary_rank_mod2": boundary_rank_mod2,
                "boundary_rank_modp": boundary_rank_modp,
            }),
        })
        .collect()
}

fn validate(b: &Bundle) -> Out {
    Ok(match &b.space {
        Space::Cone(c) => {
            let r = c.validate();
            json!({
                "kind": "single_vertex",
                "ok": r.ok,
                "violations": violations_json(&r, |_| "O".into(), |f| c.cones[f].id.clone()),
                "link": link_stats(&c.link),
            })
        }
        Space::Complex(c) => {
            let r = validate_cat0(c);
            json!({
                "kind": "triangulated",
                "ok": r.ok,
                "violations": violations_json(&r, |v| c.vertices[v].clone(), |f| c.faces[f].id.clone()),
                "vertices": c.vertices.len(),
                "edges": c.edges.len(),
                "faces": c.faces.len(),
                "manifold": c.is_manifold(),
            })
        }
    })
}

fn link_graph_json(g: &LinkGraph, node: impl Fn(usize) -> String, arc: impl Fn(usize) -> String) -> Value {
    json!({
        "nodes": g.nodes.iter().map(|&n| node(n)).collect::<Vec<_>>(),
        "arcs": g.arcs.iter().map(|a| json!({
            "id": arc(a.key),
            "ends": [node(g.nodes[a.ends[0]]), node(g.nodes[a.ends[1]])],
            "weight": a.weight,
        })).collect::<Vec<_>>(),
        "stats": link_stats(g),
    })
}

fn link(b: &Bundle, vertex: &Option<String>, given: &[String]) -> Out {
    match &b.space {
        Space::Complex(c) => {
            let id = vertex.as_deref().ok_or_else(|| usage("--vertex is required for triangulated complexes"))?;
            let v = c.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.into()))?;
            let g = c.link_graph(v)?;
            Ok(json!({ "vertex": id, "link": link_graph_json(&g, |e| c.edges[e].id.clone(), |f| c.faces[f].id.clone()) }))
        }
        Space::Cone(c) => {
            let mut out = json!({ "link": link_graph_json(&c.link, |r| c.rays[r].clone(), |k| c.cones[k].id.clone()) });
            if !given.is_empty() {
                let pts = pick(b, given, 2)?;
                let dirs: Vec<_> = pts
                    .iter()
                    .map(|(n, p)| as_cone(p).direction(c).ok_or_else(|| Error::Domain(format!("{n} is the apex and has no direction"))))
                    .collect::<Result<_, _>>()?;
                out["distance"] = match link_distance(&c.link, dirs[0], dirs[1]) {
                    LinkDist::Finite(d) => json!({ "finite": d, "degrees": d.to_degrees() }),
                    LinkDist::AtLeastPi => json!("at_least_pi"),
                };
                out["points"] = json!([pts[0].0, pts[1].0]);
            }
            Ok(out)
        }
    }
}

fn path_json(c: &PolyComplex2D, p: &GeodesicPath) -> Value {
    json!({
        "length": p.length,
        "waypoints": p.waypoints.iter().map(|w| io::location_json(c, w)).collect::<Vec<_>>(),
        "faces": p.segment_faces.iter().map(|&f| &c.faces[f].id).collect::<Vec<_>>(),
    })
}

fn last_step(cli: &Cli, c: &PolyComplex2D, src: &Location) -> Result<(LastStepMap, cat0_core::spm::ShortestPathMap), Failure> {
    let spm = build_spm(c, src, cli.region_cap)?;
    debug!("shortest path map with {} regions", spm.region_count());
    Ok((derive_last_step(&spm), spm))
}

fn write_svg(cli: &Cli, c: &PolyComplex2D, paths: &[GeodesicPath]) -> Result<(), Failure> {
    if let Some(p) = &cli.svg {
        std::fs::write(p, svg::render(c, paths)).map_err(|e| fail("Io", format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn geodesic_cmd(cli: &Cli, b: &Bundle, given: &[String]) -> Out {
    let pts = pick(b, given, 2)?;
    match &b.space {
        Space::Cone(c) => {
            if cli.svg.is_some() {
                return Err(usage("--svg applies to triangulated complexes"));
            }
            let g = geodesic(c, &as_cone(&pts[0].1), &as_cone(&pts[1].1))?;
            Ok(json!({
                "from": pts[0].0,
                "to": pts[1].0,
                "length": g.length,
                "through_origin": g.through_origin,
                "crossings": g.crossings.iter().map(|&(r, x)| json!({ "ray": c.rays[r], "x": x })).collect::<Vec<_>>(),
            }))
        }
        Space::Complex(c) => {
            let (lsm, _) = last_step(cli, c, &as_loc(&pts[0].1))?;
            let path = query_path(&lsm, &lsm.locate(&as_loc(&pts[1].1))?)?;
            write_svg(cli, &lsm.complex, std::slice::from_ref(&path))?;
            let mut out = path_json(&lsm.complex, &path);
            out["from"] = json!(pts[0].0);
            out["to"] = json!(pts[1].0);
            Ok(out)
        }
    }
}

fn hull_options(cli: &Cli) -> HullOptions {
    HullOptions {
        arith: cli.arith.map(|a| match a {
            ArithArg::Float => Arith::Float,
            ArithArg::Rational => Arith::Rational,
        }),
        force_general: false,
    }
}

fn hull(cli: &Cli, b: &Bundle, oracle: bool) -> Out {
    let c = cone(b)?;
    let pts = points_of(b);
    let h = solve_hull_with(c, &pts, hull_options(cli))?;
    let mut out = serde_json::to_value(&h).map_err(|e| fail("Internal", e))?;
    if oracle {
        let o = iterative_hull_oracle(c, &pts, cli.eps, cli.max_rounds);
        out["oracle"] = json!({
            "converged": o.converged,
            "rounds": o.rounds,
            "origin_in_hull": o.origin_in_hull,
            "crossings": serde_json::to_value(&o.crossings).map_err(|e| fail("Internal", e))?,
        });
    }
    Ok(out)
}

fn peel_cmd(cli: &Cli, b: &Bundle) -> Out {
    let c = cone(b)?;
    let layers = peel(c, &points_of(b), PeelStop::Rounds(cli.max_rounds))?;
    let names: Vec<Vec<&str>> = layers.iter().map(|l| l.iter().map(|&i| b.points[i].0.as_str()).collect()).collect();
    Ok(json!({ "layers": names }))
}

fn member(cli: &Cli, b: &Bundle, point: &str) -> Out {
    let c = cone(b)?;
    let (name, q) = resolve(b, point)?;
    let q = as_cone(&q);
    c.check_point(&q)?;
    let h = solve_hull_with(c, &points_of(b), hull_options(cli))?;
    Ok(json!({ "point": name, "member": h.contains(c, &q), "on_boundary": h.contains(c, &q) && h.on_boundary(c, &q) }))
}

fn source_of(b: &Bundle, given: &Option<String>) -> Result<Location, Failure> {
    match given {
        Some(s) => Ok(as_loc(&resolve(b, s)?.1)),
        None => b.source.map(|p| as_loc(&p)).ok_or_else(|| usage("no source: pass --source or use a bundle with one")),
    }
}

fn spm_cmd(cli: &Cli, b: &Bundle, given: &Option<String>) -> Out {
    let c = complex(b)?;
    let (lsm, spm) = last_step(cli, c, &source_of(b, given)?)?;
    let w = &lsm.complex;
    let lemmas = verify_entry_lemmas(&spm);
    let report = branch_counts(&spm);
    let edges: Vec<Value> = lsm
        .edge_in
        .iter()
        .enumerate()
        .map(|(e, i)| {
            let tag = match *i {
                EdgeIn::Along(v) => json!({ "along": w.vertices[v] }),
                EdgeIn::Face(f) => json!({ "face": w.faces[f].id }),
                EdgeIn::Unreached => Value::Null,
            };
            json!({ "id": w.edges[e].id, "in": tag })
        })
        .collect();
    let faces: Vec<Value> = lsm
        .faces
        .iter()
        .enumerate()
        .map(|(f, e)| {
            json!({
                "id": w.faces[f].id,
                "type": e.ty.map(|t| format!("{t:?}")),
                "vertex": e.vertex.map(|v| &w.vertices[v]),
                "edges": e.edges.iter().map(|&x| &w.edges[x].id).collect::<Vec<_>>(),
                "rays": e.rays,
            })
        })
        .collect();
    Ok(json!({
        "summary": {
            "regions": spm.region_count(),
            "boundary_trees": spm.trees.len(),
            "max_branches_per_tree": report.max_branches_per_tree,
        },
        "source": w.vertices[lsm.source],
        "trees": report.trees.iter().map(|t| json!({
            "vertex": t.vertex,
            "nodes": t.nodes,
            "branches": t.branches,
            "repeated_faces": t.repeated_faces,
            "reentries": t.reentries,
        })).collect::<Vec<_>>(),
        "lemmas": { "ok": lemmas.ok, "violations": lemmas.violations },
        "last_step": { "edges": edges, "faces": faces, "size": lsm.size() },
    }))
}

fn query(cli: &Cli, b: &Bundle, source: &Option<String>, given: &[String]) -> Out {
    let c = complex(b)?;
    let (lsm, _) = last_step(cli, c, &source_of(b, source)?)?;
    let targets: Vec<(String, Point)> = if given.is_empty() {
        b.points.clone()
    } else {
        given.iter().map(|s| resolve(b, s)).collect::<Result<_, _>>()?
    };
    if targets.is_empty() {
        return Err(usage("no targets: pass --point or give named points"));
    }
    let mut paths = Vec::new();
    let mut out = Vec::new();
    for (name, t) in &targets {
        let p = query_path(&lsm, &lsm.locate(&as_loc(t))?)?;
        let mut j = path_json(&lsm.complex, &p);
        j["target"] = json!(name);
        out.push(j);
        paths.push(p);
    }
    write_svg(cli, &lsm.complex, &paths)?;
    Ok(json!({ "paths": out }))
}

pub fn run(cli: &Cli) -> Out {
    if let Command::Gen { name } = &cli.command {
        return Ok(io::bundle_json(&io::generate(name)?));
    }
    let b = load(cli)?;
    match &cli.command {
        Command::Validate => validate(&b),
        Command::Link { vertex, point } => link(&b, vertex, point),
        Command::Geodesic { point } => geodesic_cmd(cli, &b, point),
        Command::Hull { oracle } => hull(cli, &b, *oracle),
        Command::Peel => peel_cmd(cli, &b),
        Command::Member { point } => member(cli, &b, point),
        Command::Spm { source } => spm_cmd(cli, &b, source),
        Command::Query { source, point } => query(cli, &b, source, point),
        Command::Gen { .. } => unreachable!(),
    }
}
