//! Complexes for shortest-path tests: small flat pieces, corridors, flowers,
//! random CAT(0) complexes, the branching family and the pinwheel whose
//! incoming information is cyclic.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex_core::{validate_cat0, EdgeInfo, FaceInfo, Location, PolyComplex2D, RectInfo};
use crate::error::Result;

/// A complex with a designated source vertex.
#[derive(Debug, Clone)]
pub struct SpmFixture {
    pub complex: PolyComplex2D,
    pub source: Location,
}

impl SpmFixture {
    fn at(complex: PolyComplex2D, source: &str) -> Self {
        let v = complex.vertex_index(source).expect("source vertex exists");
        SpmFixture { complex, source: Location::Vertex(v) }
    }
}

/// Triangulated point set in R³; edge lengths are Euclidean.
pub fn from_points(names: &[String], pts: &[[f64; 3]], tris: &[[usize; 3]]) -> Result<PolyComplex2D> {
    let mut edges: Vec<EdgeInfo> = Vec::new();
    let mut key = std::collections::HashMap::new();
    let mut edge_id = |a: usize, b: usize, edges: &mut Vec<EdgeInfo>| -> String {
        let (a, b) = (a.min(b), a.max(b));
        key.entry((a, b))
            .or_insert_with(|| {
                let id = format!("{}-{}", names[a], names[b]);
                let d = ((0..3).map(|k| (pts[a][k] - pts[b][k]).powi(2)).sum::<f64>()).sqrt();
                edges.push(EdgeInfo { id: id.clone(), ends: [names[a].clone(), names[b].clone()], length: d });
                id
            })
            .clone()
    };
    let mut faces = Vec::new();
    for (k, t) in tris.iter().enumerate() {
        let e = [edge_id(t[0], t[1], &mut edges), edge_id(t[1], t[2], &mut edges), edge_id(t[2], t[0], &mut edges)];
        faces.push(FaceInfo { id: format!("t{k}"), edges: e });
    }
    PolyComplex2D::new(names.to_vec(), edges, faces)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn flat(p: &[(f64, f64)]) -> Vec<[f64; 3]> {
    p.iter().map(|&(x, y)| [x, y, 0.0]).collect()
}

pub fn single_triangle() -> SpmFixture {
    let c = from_points(&names("v", 3), &flat(&[(0.0, 0.0), (2.0, 0.0), (0.6, 1.5)]), &[[0, 1, 2]]).unwrap();
    SpmFixture::at(c, "v0")
}

/// Square `[-1, 1]²` cut into four triangles at its center, the source.
pub fn flat_square() -> SpmFixture {
    let pts = flat(&[(0.0, 0.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)]);
    let c = from_points(&names("v", 5), &pts, &[[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]).unwrap();
    SpmFixture::at(c, "v0")
}

/// Two triangles sharing an edge, source at a far corner.
pub fn two_faces() -> SpmFixture {
    let pts = flat(&[(0.0, 0.0), (2.0, 0.3), (0.8, 1.4), (2.2, 1.9)]);
    let c = from_points(&names("v", 4), &pts, &[[0, 1, 2], [1, 3, 2]]).unwrap();
    SpmFixture::at(c, "v0")
}

/// Three unit squares in an L; paths around the inner corner bend there.
pub fn l_shape() -> SpmFixture {
    let pts = flat(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (0.0, 2.0), (1.0, 2.0)]);
    let tris = [[0, 1, 4], [0, 4, 3], [1, 2, 5], [1, 5, 4], [3, 4, 7], [3, 7, 6]];
    SpmFixture::at(from_points(&names("v", 8), &pts, &tris).unwrap(), "v2")
}

/// `k` unit squares in a row, each split along a diagonal; source at a corner.
pub fn corridor(k: usize) -> SpmFixture {
    let mut vertices = Vec::new();
    for i in 0..=k {
        vertices.push(format!("b{i}"));
        vertices.push(format!("t{i}"));
    }
    let mut edges = Vec::new();
    for i in 0..=k {
        edges.push((format!("r{i}"), [format!("b{i}"), format!("t{i}")], Some(1.0)));
    }
    for i in 0..k {
        edges.push((format!("lo{i}"), [format!("b{i}"), format!("b{}", i + 1)], Some(1.0)));
        edges.push((format!("hi{i}"), [format!("t{i}"), format!("t{}", i + 1)], Some(1.0)));
    }
    let rects = (0..k)
        .map(|i| RectInfo {
            id: format!("q{i}"),
            edges: [format!("lo{i}"), format!("r{}", i + 1), format!("hi{i}"), format!("r{i}")],
            width: 1.0,
            height: 1.0,
        })
        .collect();
    SpmFixture::at(PolyComplex2D::from_rects(vertices, edges, rects).unwrap(), "b0")
}

/// `pages` triangles sharing one edge; source at the far corner of the first.
pub fn triangle_book(pages: usize) -> SpmFixture {
    let mut tris = Vec::new();
    let mut pts = flat(&[(0.0, 0.0), (0.0, 2.0)]);
    for k in 0..pages {
        let a = 2.0 * PI * k as f64 / pages as f64;
        pts.push([1.3 * a.cos(), 0.7 + 0.2 * k as f64, 1.3 * a.sin()]);
        tris.push([0, 1, k + 2]);
    }
    SpmFixture::at(from_points(&names("v", pages + 2), &pts, &tris).unwrap(), "v2")
}

/// `k` equilateral triangles around a center; total angle `kπ/3` there.
pub fn flower(k: usize) -> SpmFixture {
    let mut names = vec!["o".to_string()];
    names.extend((0..k).map(|i| format!("p{i}")));
    let mut edges: Vec<EdgeInfo> = (0..k).map(|i| EdgeInfo { id: format!("s{i}"), ends: ["o".into(), format!("p{i}")], length: 1.0 }).collect();
    edges.extend((0..k).map(|i| EdgeInfo { id: format!("r{i}"), ends: [format!("p{i}"), format!("p{}", (i + 1) % k)], length: 1.0 }));
    let faces = (0..k).map(|i| FaceInfo { id: format!("f{i}"), edges: [format!("s{i}"), format!("r{i}"), format!("s{}", (i + 1) % k)] }).collect();
    SpmFixture::at(PolyComplex2D::new(names, edges, faces).unwrap(), "p0")
}

/// An `m × n` grid of cells with random diagonals, vertices jittered in the
/// plane and lifted to `z = saddle · x · y`.
pub fn random_grid<R: Rng>(rng: &mut R, m: usize, n: usize, jitter: f64, saddle: f64) -> PolyComplex2D {
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut pts = Vec::new();
    for i in 0..=m {
        for j in 0..=n {
            let (mut x, mut y) = (j as f64, i as f64);
            if i > 0 && i < m {
                y += rng.gen_range(-jitter..=jitter);
            }
            if j > 0 && j < n {
                x += rng.gen_range(-jitter..=jitter);
            }
            pts.push([x, y, saddle * (x - n as f64 / 2.0) * (y - m as f64 / 2.0)]);
        }
    }
    let mut tris = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j));
            if rng.gen_bool(0.5) {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            } else {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            }
        }
    }
    from_points(&names("g", pts.len()), &pts, &tris).unwrap()
}

/// Glue `count` new triangles onto random edges. Links only gain pendant
/// arcs, so CAT(0) is preserved.
pub fn add_fins<R: Rng>(rng: &mut R, c: &PolyComplex2D, count: usize) -> PolyComplex2D {
    let mut vertices = c.vertices.clone();
    let mut edges: Vec<EdgeInfo> = c
        .edges
        .iter()
        .map(|e| EdgeInfo { id: e.id.clone(), ends: e.ends.map(|v| c.vertices[v].clone()), length: e.length })
        .collect();
    let mut faces: Vec<FaceInfo> =
        c.faces.iter().map(|f| FaceInfo { id: f.id.clone(), edges: f.edges.map(|e| c.edges[e].id.clone()) }).collect();
    for k in 0..count {
        let e = &c.edges[rng.gen_range(0..c.edges.len())];
        let apex = format!("fin{k}");
        vertices.push(apex.clone());
        let l = e.length;
        let (la, lb) = (rng.gen_range(0.6..1.4) * l, rng.gen_range(0.6..1.4) * l);
        let (la, lb) = if la + lb > 1.05 * l && (la - lb).abs() < 0.95 * l { (la, lb) } else { (l, l) };
        let ea = format!("{apex}a");
        let eb = format!("{apex}b");
        edges.push(EdgeInfo { id: ea.clone(), ends: [c.vertices[e.ends[0]].clone(), apex.clone()], length: la });
        edges.push(EdgeInfo { id: eb.clone(), ends: [c.vertices[e.ends[1]].clone(), apex.clone()], length: lb });
        faces.push(FaceInfo { id: format!("{apex}f"), edges: [e.id.clone(), eb, ea] });
    }
    PolyComplex2D::new(vertices, edges, faces).unwrap()
}

/// A random CAT(0) complex with at most `max_faces` faces (at least 2) and a random source vertex.
pub fn random_cat0<R: Rng>(rng: &mut R, max_faces: usize) -> SpmFixture {
    loop {
        let budget = max_faces.max(2);
        let &(m, n) = *[(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)].iter().filter(|(m, n)| 2 * m * n <= budget).collect::<Vec<_>>().choose(rng).unwrap();
        let saddle = if rng.gen_bool(0.5) { rng.gen_range(0.2..0.8) } else { 0.0 };
        let g = random_grid(rng, m, n, 0.25, saddle);
        let spare = budget - 2 * m * n;
        let fins = if spare > 0 { rng.gen_range(0..=spare.min(3)) } else { 0 };
        let c = add_fins(rng, &g, fins);
        if validate_cat0(&c).ok {
            let v = rng.gen_range(0..c.vertices.len());
            return SpmFixture { complex: c, source: Location::Vertex(v) };
        }
    }
}

/// A random rectangular CAT(0) complex: unit squares glued along edges in a
/// tree pattern (so edges can carry three or more squares).
pub fn random_square_tree<R: Rng>(rng: &mut R, squares: usize) -> SpmFixture {
    let mut vertices: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, [String; 2], Option<f64>)> = Vec::new();
    let mut rects = Vec::new();
    let named = |a: &str, b: &str, edges: &mut Vec<(String, [String; 2], Option<f64>)>| -> String {
        let id = format!("{a}~{b}");
        edges.push((id.clone(), [a.to_string(), b.to_string()], Some(1.0)));
        id
    };
    let e0 = named("v0", "v1", &mut edges);
    let e1 = named("v1", "v2", &mut edges);
    let e2 = named("v2", "v3", &mut edges);
    let e3 = named("v3", "v0", &mut edges);
    rects.push(RectInfo { id: "q0".into(), edges: [e0.clone(), e1.clone(), e2.clone(), e3.clone()], width: 1.0, height: 1.0 });
    let mut open = vec![(e0, "v0".to_string(), "v1".to_string()), (e1, "v1".into(), "v2".into()), (e2, "v2".into(), "v3".into()), (e3, "v3".into(), "v0".into())];
    for k in 1..squares {
        let (base, a, b) = open[rng.gen_range(0..open.len())].clone();
        let (c, d) = (format!("w{k}a"), format!("w{k}b"));
        vertices.push(c.clone());
        vertices.push(d.clone());
        let bc = named(&b, &c, &mut edges);
        let cd = named(&c, &d, &mut edges);
        let da = named(&d, &a, &mut edges);
        rects.push(RectInfo { id: format!("q{k}"), edges: [base, bc.clone(), cd.clone(), da.clone()], width: 1.0, height: 1.0 });
        open.push((bc, b.clone(), c.clone()));
        open.push((cd, c, d.clone()));
        open.push((da, d, a));
    }
    let c = PolyComplex2D::from_rects(vertices, edges, rects).unwrap();
    let v = rng.gen_range(0..c.vertices.len());
    SpmFixture { complex: c, source: Location::Vertex(v) }
}

/// Stage parameters `[a1, L1, a2, L2, γ]` of the branching family; angles in
/// radians, lengths relative to the current edge.
pub const EXPONENTIAL_STAGES: [[f64; 5]; 8] = [
    [3.141581840095737, 1.5606700306801902, 3.141562495357634, 0.052156122442726556, 4.1282369045429465e-05],
    [3.1415519009863653, 2.0057010615597304, 3.1413223865093776, 0.09586684624653778, 0.0003121664617957913],
    [3.141455658392041, 1.8275993189425637, 3.1400413294732177, 0.08444959876976486, 0.0016951238058220978],
    [3.141008208762625, 1.4680779308268712, 3.136309847561311, 0.07537127674110415, 0.005882885375951687],
    [3.139323391726661, 1.867698326998791, 3.117139100306893, 0.07885281158762678, 0.027190503529681564],
    [3.133216721427564, 1.6151691530278716, 3.0683347384383817, 0.09382132782080385, 0.08212169946236977],
    [3.111161963376175, 1.908240605074815, 3.0005409417649354, 0.17099232246220286, 0.17190467724378913],
    [3.039756617505946, 1.8644862695191997, 2.2338340867673057, 0.11145762098937675, 1.0116568865871498],
];
/// Where the designated ray crosses the first branching edge, and its tilt.
pub const EXPONENTIAL_ENTRY: (f64, f64) = (0.9, 1e-5);

fn law_of_cosines(a: f64, b: f64, angle: f64) -> f64 {
    // Stable near angle ≈ π: a² + b² − 2ab·cos θ = (a + b)² − 4ab·cos²(θ/2).
    let c = (0.5 * angle).cos();
    ((a + b).powi(2) - 4.0 * a * b * c * c).max(0.0).sqrt()
}

/// The branching family: base faces `h`, `g0` and `n` stages of three faces.
/// The ray from `v` continuing the path `s → v` doubles at every stage.
/// Supports `n ≤ 8`, the tuned stage count.
pub fn gen_exponential_complex(n: usize) -> SpmFixture {
    assert!(n <= EXPONENTIAL_STAGES.len(), "branching family is tuned for at most 8 stages");
    let (u0, th0) = EXPONENTIAL_ENTRY;
    let d = [(-th0).cos(), (-th0).sin()];
    let v = [u0 - 0.5 * d[0], -0.5 * d[1]];
    let s = [v[0] - 0.5 * d[0], v[1] - 0.5 * d[1]];
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let p0 = [0.0, 0.0];
    let q0 = [1.0, 0.0];
    let mut vertices: Vec<String> = ["s", "v", "x0", "y0"].iter().map(|x| x.to_string()).collect();
    let mut edges = vec![];
    let add_edge = |id: &str, a: &str, b: &str, l: f64, edges: &mut Vec<EdgeInfo>| {
        edges.push(EdgeInfo { id: id.into(), ends: [a.into(), b.into()], length: l });
    };
    add_edge("s-v", "s", "v", dist(s, v), &mut edges);
    add_edge("s-x0", "s", "x0", dist(s, p0), &mut edges);
    add_edge("v-x0", "v", "x0", dist(v, p0), &mut edges);
    add_edge("v-y0", "v", "y0", dist(v, q0), &mut edges);
    add_edge("e0", "x0", "y0", 1.0, &mut edges);
    let mut faces = vec![
        FaceInfo { id: "h".into(), edges: ["s-v".into(), "v-x0".into(), "s-x0".into()] },
        FaceInfo { id: "g0".into(), edges: ["v-x0".into(), "e0".into(), "v-y0".into()] },
    ];
    // Current branching edge e_{i} = (p, q) with its length.
    let (mut p, mut q, mut len) = ("x0".to_string(), "y0".to_string(), 1.0);
    for (i, st) in EXPONENTIAL_STAGES.iter().take(n).enumerate() {
        let [a1, l1, a2, l2, gamma] = *st;
        let k = i + 1;
        let (xa, xb) = (format!("a{k}"), format!("b{k}"));
        vertices.push(xa.clone());
        vertices.push(xb.clone());
        let (la, lb) = (l1 * len, l2 * len);
        let e = format!("e{i}");
        let next = format!("e{k}");
        add_edge(&format!("{q}-{xa}"), &q, &xa, la, &mut edges);
        add_edge(&format!("{p}-{xa}"), &p, &xa, law_of_cosines(len, la, a1), &mut edges);
        add_edge(&format!("{q}-{xb}"), &q, &xb, lb, &mut edges);
        add_edge(&format!("{p}-{xb}"), &p, &xb, law_of_cosines(len, lb, a2), &mut edges);
        let lab = law_of_cosines(la, lb, gamma);
        add_edge(&next, &xa, &xb, lab, &mut edges);
        faces.push(FaceInfo { id: format!("f{k}'"), edges: [e.clone(), format!("{q}-{xa}"), format!("{p}-{xa}")] });
        faces.push(FaceInfo { id: format!("f{k}''"), edges: [e, format!("{q}-{xb}"), format!("{p}-{xb}")] });
        faces.push(FaceInfo { id: format!("g{k}"), edges: [format!("{q}-{xa}"), next, format!("{q}-{xb}")] });
        p = xb;
        q = xa;
        len = lab;
    }
    SpmFixture::at(PolyComplex2D::new(vertices, edges, faces).unwrap(), "s")
}

/// Inner and outer radius and twist (degrees) of the pinwheel.
pub const PINWHEEL: (f64, f64, f64) = (1.0, 2.0, 20.0);

/// A flat hexagonal pinwheel around the source: six faces, each entered
/// through two edges and a vertex, whose incoming information forms a cycle.
pub fn gen_incoming_cycle() -> SpmFixture {
    let (r1, r2, twist) = PINWHEEL;
    let mut pts = vec![(0.0, 0.0)];
    for k in 0..6 {
        let a = (60.0 * k as f64).to_radians();
        pts.push((r1 * a.cos(), r1 * a.sin()));
    }
    for k in 0..6 {
        let a = (60.0 * k as f64 - twist).to_radians();
        pts.push((r2 * a.cos(), r2 * a.sin()));
    }
    let (ia, ib) = (|k: usize| 1 + k % 6, |k: usize| 7 + k % 6);
    let mut tris = Vec::new();
    for k in 0..6 {
        tris.push([0, ia(k), ia(k + 1)]);
        tris.push([ia(k), ia(k + 1), ib(k)]);
        tris.push([ia(k + 1), ib(k + 1), ib(k)]);
    }
    let mut nm = vec!["s".to_string()];
    nm.extend((0..6).map(|k| format!("A{k}")));
    nm.extend((0..6).map(|k| format!("B{k}")));
    SpmFixture::at(from_points(&nm, &flat(&pts), &tris).unwrap(), "s")
}
