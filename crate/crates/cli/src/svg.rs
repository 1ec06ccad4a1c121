//! Unfolded drawings of shortest paths. Faces crossed through an edge are
//! glued along it; at a vertex the next face is turned so the path continues
//! straight, and the vertex is marked.

use std::fmt::Write;

use cat0_core::complex_core::{glue, GeodesicPath, Location, PolyComplex2D};
use cat0_core::geom::{self, Iso2, P2};

struct Layout {
    triangles: Vec<[P2; 3]>,
    line: Vec<P2>,
    bends: Vec<P2>,
}

fn layout(c: &PolyComplex2D, path: &GeodesicPath) -> Layout {
    let mut out = Layout { triangles: Vec::new(), line: Vec::new(), bends: Vec::new() };
    let pos = |k: usize, f: usize| c.pos_in_face(&path.waypoints[k], f).expect("waypoint lies on its segment face");
    let mut iso = Iso2::IDENTITY;
    for (k, &f) in path.segment_faces.iter().enumerate() {
        if k > 0 {
            let prev = path.segment_faces[k - 1];
            if prev != f {
                iso = match path.waypoints[k] {
                    Location::Edge { edge, .. } if c.faces[f].has_edge(edge) && c.faces[prev].has_edge(edge) => glue(c, iso, prev, f, edge),
                    _ => {
                        let at = *out.line.last().unwrap();
                        let dir = geom::sub(at, out.line[out.line.len() - 2]);
                        let (a0, b0) = (pos(k, f), pos(k + 1, f));
                        let len = geom::dist(a0, b0);
                        let n = geom::norm(dir);
                        let b1 = if n > 0.0 { geom::add(at, geom::scale(dir, len / n)) } else { geom::add(at, [len, 0.0]) };
                        out.bends.push(at);
                        Iso2::from_segments(a0, b0, at, b1, false)
                    }
                };
            }
        }
        let t = c.faces[f].coords.map(|p| iso.apply(p));
        if out.triangles.last() != Some(&t) {
            out.triangles.push(t);
        }
        if k == 0 {
            out.line.push(iso.apply(pos(0, f)));
        }
        out.line.push(iso.apply(pos(k + 1, f)));
    }
    if out.line.is_empty() {
        if let Some(f) = c.faces_of(&path.waypoints[0]).first() {
            out.line.push(pos(0, *f));
            out.triangles.push(c.faces[*f].coords);
        }
    }
    out
}

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 16.0;

/// One row per path, each scaled to the common width.
pub fn render(c: &PolyComplex2D, paths: &[GeodesicPath]) -> String {
    let mut body = String::new();
    let mut y0 = 0.0;
    for (i, path) in paths.iter().enumerate() {
        let l = layout(c, path);
        let pts = l.triangles.iter().flatten().chain(&l.line);
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if !lo[0].is_finite() {
            continue;
        }
        let s = (WIDTH - 2.0 * MARGIN) / (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let h = (hi[1] - lo[1]) * s + 2.0 * MARGIN;
        let map = |p: &P2| format!("{:.3},{:.3}", MARGIN + (p[0] - lo[0]) * s, y0 + MARGIN + (hi[1] - p[1]) * s);
        let _ = writeln!(body, "<g id=\"path{i}\">");
        for t in &l.triangles {
            let _ = writeln!(body, "<polygon points=\"{}\" fill=\"#eef\" stroke=\"#889\" stroke-width=\"1\"/>", t.iter().map(map).collect::<Vec<_>>().join(" "));
        }
        let _ = writeln!(body, "<polyline points=\"{}\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>", l.line.iter().map(map).collect::<Vec<_>>().join(" "));
        for b in &l.bends {
            let xy = map(b);
            let (x, y) = xy.split_once(',').unwrap();
            let _ = writeln!(body, "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"#226\"/>");
        }
        let _ = writeln!(body, "</g>");
        y0 += h;
    }
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{:.0}\">\n{body}</svg>\n", y0.max(1.0))
}
