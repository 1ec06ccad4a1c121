//! JSON interchange: complex and point schemas, fixture bundles, and a
//! canonical writer (sorted keys, floats as `%.12g`) for byte-stable output.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::complex_core::{EdgeInfo, FaceInfo, Location, PolyComplex2D, RectInfo};
use crate::error::{Error, Result};
use crate::fixtures::{book3, fig3, fig4, ConeFixture};
use crate::spm::fixtures::{gen_exponential_complex, gen_incoming_cycle, SpmFixture};
use crate::single_vertex::{ConePoint, SingleVertexComplex};
use crate::treespace::{build_t5, tree_to_point, Split, Tree5};

/// Either kind of ambient space accepted on input.
#[derive(Debug, Clone)]
pub enum Space {
    Complex(PolyComplex2D),
    Cone(SingleVertexComplex),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Complex(Location),
    Cone(ConePoint),
}

/// A space with named points, named probes and an optional source point.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub space: Space,
    pub points: Vec<(String, Point)>,
    pub probes: Vec<(String, Point)>,
    pub source: Option<Point>,
}

impl Bundle {
    pub fn new(space: Space) -> Self {
        Self { space, points: Vec::new(), probes: Vec::new(), source: None }
    }

    pub fn named(&self, name: &str) -> Option<Point> {
        self.points.iter().chain(&self.probes).find(|(n, _)| n == name).map(|(_, p)| *p)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedInput(msg.into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    ends: [String; 2],
    length: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceDoc {
    id: String,
    edges: [String; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RectDoc {
    id: String,
    edges: [String; 4],
    width: f64,
    height: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDoc {
    id: String,
    rays: [String; 2],
    angle: f64,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SpaceDoc {
    Triangulated { vertices: Vec<String>, edges: Vec<EdgeDoc>, faces: Vec<FaceDoc> },
    Rectangular { vertices: Vec<String>, edges: Vec<EdgeDoc>, rects: Vec<RectDoc> },
    SingleVertex { rays: Vec<String>, cones: Vec<ConeDoc> },
}

fn space_from_doc(doc: SpaceDoc) -> Result<Space> {
    match doc {
        SpaceDoc::Triangulated { vertices, edges, faces } => {
            let edges = edges
                .into_iter()
                .map(|e| {
                    let length = e.length.ok_or_else(|| bad(format!("edge {} needs a length", e.id)))?;
                    Ok(EdgeInfo { id: e.id, ends: e.ends, length })
                })
                .collect::<Result<Vec<_>>>()?;
            let faces = faces.into_iter().map(|f| FaceInfo { id: f.id, edges: f.edges }).collect();
            Ok(Space::Complex(PolyComplex2D::new(vertices, edges, faces)?))
        }
        SpaceDoc::Rectangular { vertices, edges, rects } => {
            let edges = edges.into_iter().map(|e| (e.id, e.ends, e.length)).collect();
            let rects = rects.into_iter().map(|r| RectInfo { id: r.id, edges: r.edges, width: r.width, height: r.height }).collect();
            Ok(Space::Complex(PolyComplex2D::from_rects(vertices, edges, rects)?))
        }
        SpaceDoc::SingleVertex { rays, cones } => {
            let cones = cones.into_iter().map(|c| (c.id, c.rays, snap_angle(c.angle))).collect();
            Ok(Space::Cone(SingleVertexComplex::build(rays, cones)?))
        }
    }
}

/// Angles within `1e-7` of a whole number of degrees are taken to be exactly
/// that, so hand-written right angles such as `1.5707963` select the exact
/// right-angled code paths.
pub fn snap_angle(a: f64) -> f64 {
    let deg = (a.to_degrees()).round();
    let exact = match deg {
        90.0 => std::f64::consts::FRAC_PI_2,
        180.0 => std::f64::consts::PI,
        _ => deg.to_radians(),
    };
    if (a - exact).abs() < 1e-7 {
        exact
    } else {
        a
    }
}

pub fn parse_space(v: &Value) -> Result<Space> {
    space_from_doc(SpaceDoc::deserialize(v).map_err(|e| bad(e.to_string()))?)
}

fn str_field<'a>(o: &'a Map<String, Value>, k: &str) -> Result<&'a str> {
    o.get(k).and_then(Value::as_str).ok_or_else(|| bad(format!("point field {k:?} must be a string")))
}

fn num_field(o: &Map<String, Value>, k: &str) -> Result<f64> {
    o.get(k).and_then(Value::as_f64).ok_or_else(|| bad(format!("point field {k:?} must be a number")))
}

fn check_keys(o: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match o.keys().find(|k| !allowed.contains(&k.as_str()) && k.as_str() != "name") {
        Some(k) => Err(bad(format!("unexpected point field {k:?}"))),
        None => Ok(()),
    }
}

/// Parse one point of `space`. Cone spaces also accept `{"splits": [...]}`
/// when their rays are named by splits.
pub fn parse_point(space: &Space, v: &Value) -> Result<Point> {
    let o = v.as_object().ok_or_else(|| bad("a point must be an object"))?;
    match space {
        Space::Complex(c) => {
            let loc = if o.contains_key("vertex") {
                check_keys(o, &["vertex"])?;
                let id = str_field(o, "vertex")?;
                Location::Vertex(c.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.into()))?)
            } else if o.contains_key("edge") {
                check_keys(o, &["edge", "t"])?;
                let id = str_field(o, "edge")?;
                let edge = c.edge_index(id).ok_or_else(|| Error::UnknownLocation(format!("edge {id}")))?;
                Location::Edge { edge, t: num_field(o, "t")? }
            } else if o.contains_key("face") {
                check_keys(o, &["face", "x", "y"])?;
                let id = str_field(o, "face")?;
                let face = c.face_index(id).ok_or_else(|| Error::UnknownLocation(format!("face {id}")))?;
                Location::Face { face, p: [num_field(o, "x")?, num_field(o, "y")?] }
            } else {
                return Err(bad("a complex point needs a vertex, edge or face"));
            };
            c.validate_location(&loc)?;
            Ok(Point::Complex(loc))
        }
        Space::Cone(c) => {
            let cone_of = |o: &Map<String, Value>| -> Result<usize> {
                let id = str_field(o, "cone")?;
                c.cone_index(id).ok_or_else(|| bad(format!("unknown cone {id}")))
            };
            let p = if o.contains_key("origin") {
                check_keys(o, &["origin"])?;
                if o["origin"] != Value::Bool(true) {
                    return Err(bad("origin must be true"));
                }
                ConePoint::Origin
            } else if o.contains_key("ray") {
                check_keys(o, &["ray", "radius"])?;
                let id = str_field(o, "ray")?;
                let ray = c.ray_index(id).ok_or_else(|| bad(format!("unknown ray {id}")))?;
                ConePoint::OnRay { ray, radius: num_field(o, "radius")? }
            } else if o.contains_key("angle_from_first") {
                check_keys(o, &["cone", "angle_from_first", "radius"])?;
                ConePoint::InCone { cone: cone_of(o)?, angle: snap_angle(num_field(o, "angle_from_first")?), radius: num_field(o, "radius")? }
            } else if o.contains_key("cone") {
                check_keys(o, &["cone", "x", "y"])?;
                ConePoint::InQuadrant { cone: cone_of(o)?, x: num_field(o, "x")?, y: num_field(o, "y")? }
            } else if o.contains_key("splits") {
                check_keys(o, &["splits"])?;
                return Ok(Point::Cone(tree_to_point(c, &parse_tree(v)?)?));
            } else {
                return Err(bad("a cone point needs origin, ray, cone or splits"));
            };
            c.check_point(&p)?;
            Ok(Point::Cone(p))
        }
    }
}

/// Parse `{"splits":[{"split":"12|345","length":1.0}, ...]}`.
pub fn parse_tree(v: &Value) -> Result<Tree5> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct SplitDoc {
        split: String,
        length: f64,
    }
    #[derive(Deserialize)]
    struct TreeDoc {
        splits: Vec<SplitDoc>,
    }
    let doc = TreeDoc::deserialize(v).map_err(|e| bad(e.to_string()))?;
    let splits = doc.splits.into_iter().map(|s| Ok((s.split.parse::<Split>()?, s.length))).collect::<Result<_>>()?;
    Ok(Tree5 { splits })
}

fn parse_named(space: &Space, v: &Value) -> Result<Vec<(String, Point)>> {
    let arr = v.as_array().ok_or_else(|| bad("points must be an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| {
            let name = p.get("name").and_then(Value::as_str).map_or_else(|| format!("#{i}"), str::to_string);
            Ok((name, parse_point(space, p)?))
        })
        .collect()
}

/// Points given as an array or as `{"points": [...]}`.
pub fn parse_points(space: &Space, v: &Value) -> Result<Vec<(String, Point)>> {
    match v.get("points") {
        Some(p) => parse_named(space, p),
        None => parse_named(space, v),
    }
}

/// A bare complex, or `{"complex": ..., "points": [...], "probes": [...], "source": ...}`.
pub fn parse_bundle(v: &Value) -> Result<Bundle> {
    let Some(cv) = v.get("complex") else { return Ok(Bundle::new(parse_space(v)?)) };
    if let Some(k) = v.as_object().unwrap().keys().find(|k| !["complex", "points", "probes", "source"].contains(&k.as_str())) {
        return Err(bad(format!("unexpected bundle field {k:?}")));
    }
    let mut b = Bundle::new(parse_space(cv)?);
    if let Some(p) = v.get("points") {
        b.points = parse_named(&b.space, p)?;
    }
    if let Some(p) = v.get("probes") {
        b.probes = parse_named(&b.space, p)?;
    }
    if let Some(s) = v.get("source") {
        b.source = Some(parse_point(&b.space, s)?);
    }
    Ok(b)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))
}

pub fn space_json(space: &Space) -> Value {
    match space {
        Space::Complex(c) => json!({
            "kind": "triangulated",
            "vertices": c.vertices,
            "edges": c.edges.iter().map(|e| json!({
                "id": e.id,
                "ends": [c.vertices[e.ends[0]], c.vertices[e.ends[1]]],
                "length": e.length,
            })).collect::<Vec<_>>(),
            "faces": c.faces.iter().map(|f| json!({
                "id": f.id,
                "edges": f.edges.iter().map(|&e| &c.edges[e].id).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Space::Cone(c) => json!({
            "kind": "single_vertex",
            "rays": c.rays,
            "cones": c.cones.iter().map(|k| json!({
                "id": k.id,
                "rays": [c.rays[k.rays[0]], c.rays[k.rays[1]]],
                "angle": k.angle,
            })).collect::<Vec<_>>(),
        }),
    }
}

pub fn location_json(c: &PolyComplex2D, loc: &Location) -> Value {
    match *loc {
        Location::Vertex(v) => json!({ "vertex": c.vertices[v] }),
        Location::Edge { edge, t } => json!({ "edge": c.edges[edge].id, "t": t }),
        Location::Face { face, p } => json!({ "face": c.faces[face].id, "x": p[0], "y": p[1] }),
    }
}

pub fn cone_point_json(c: &SingleVertexComplex, p: &ConePoint) -> Value {
    match *p {
        ConePoint::Origin => json!({ "origin": true }),
        ConePoint::OnRay { ray, radius } => json!({ "ray": c.rays[ray], "radius": radius }),
        ConePoint::InCone { cone, angle, radius } => json!({ "cone": c.cones[cone].id, "angle_from_first": angle, "radius": radius }),
        ConePoint::InQuadrant { cone, x, y } => json!({ "cone": c.cones[cone].id, "x": x, "y": y }),
    }
}

pub fn point_json(space: &Space, p: &Point) -> Value {
    match (space, p) {
        (Space::Complex(c), Point::Complex(l)) => location_json(c, l),
        (Space::Cone(c), Point::Cone(q)) => cone_point_json(c, q),
        _ => panic!("point does not belong to this space"),
    }
}

pub fn bundle_json(b: &Bundle) -> Value {
    let named = |v: &[(String, Point)]| -> Vec<Value> {
        v.iter()
            .map(|(n, p)| {
                let mut o = point_json(&b.space, p);
                o["name"] = json!(n);
                o
            })
            .collect()
    };
    let mut o = json!({ "complex": space_json(&b.space), "points": named(&b.points) });
    if !b.probes.is_empty() {
        o["probes"] = json!(named(&b.probes));
    }
    if let Some(s) = &b.source {
        o["source"] = point_json(&b.space, s);
    }
    o
}

fn cone_bundle(f: ConeFixture) -> Bundle {
    let conv = |v: Vec<(String, ConePoint)>| v.into_iter().map(|(n, p)| (n, Point::Cone(p))).collect();
    Bundle { points: conv(f.points), probes: conv(f.probes), source: None, space: Space::Cone(f.complex) }
}

fn spm_bundle(f: SpmFixture) -> Bundle {
    Bundle { points: Vec::new(), probes: Vec::new(), source: Some(Point::Complex(f.source)), space: Space::Complex(f.complex) }
}

/// Largest `n` accepted by `exponential:<n>`.
pub const MAX_EXPONENTIAL: usize = 8;

/// Named fixtures: `t5`, `fig3`, `fig4`, `book3`, `exponential:<n>`, `incoming-cycle`.
pub fn generate(name: &str) -> Result<Bundle> {
    Ok(match name {
        "t5" => Bundle::new(Space::Cone(build_t5())),
        "fig3" => cone_bundle(fig3()),
        "fig4" => cone_bundle(fig4()),
        "book3" => cone_bundle(book3()),
        "incoming-cycle" => spm_bundle(gen_incoming_cycle()),
        _ => {
            let n = name
                .strip_prefix("exponential:")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| bad(format!("unknown fixture {name:?}")))?;
            if n > MAX_EXPONENTIAL {
                return Err(Error::Domain(format!("exponential fixtures go up to n = {MAX_EXPONENTIAL}")));
            }
            spm_bundle(gen_exponential_complex(n))
        }
    })
}

/// `printf("%.12g")`.
pub fn format_g12(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..12).contains(&exp) {
        trim(&format!("{x:.prec$}", prec = (11 - exp) as usize))
    } else {
        format!("{}e{}{:02}", trim(mant), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn write_canonical(v: &Value, exact: bool, out: &mut String) {
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ if exact => out.push_str(&format!("{}", n.as_f64().unwrap())),
            _ => out.push_str(&format_g12(n.as_f64().unwrap())),
        },
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(x, exact, out);
            }
            out.push(']');
        }
        Value::Object(o) => {
            let mut keys: Vec<&String> = o.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&o[k], exact, out);
            }
            out.push('}');
        }
    }
}

/// Compact JSON with sorted keys and `%.12g` floats, newline-terminated.
pub fn canonical(v: &Value) -> String {
    let mut s = String::new();
    write_canonical(v, false, &mut s);
    s.push('\n');
    s
}

/// As [`canonical`], but floats use the shortest representation that parses
/// back to the same value. Fixture output needs this: thin triangles turn
/// 12-digit length errors into visible angle errors.
pub fn canonical_exact(v: &Value) -> String {
    let mut s = String::new();
    write_canonical(v, true, &mut s);
    s.push('\n');
    s
}
