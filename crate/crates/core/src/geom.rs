//! Planar vector helpers and rigid motions.

pub type P2 = [f64; 2];

pub fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn scale(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

pub fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

pub fn dist(a: P2, b: P2) -> f64 {
    norm(sub(a, b))
}

pub fn lerp(a: P2, b: P2, t: f64) -> P2 {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

pub fn polar(r: f64, theta: f64) -> P2 {
    [r * theta.cos(), r * theta.sin()]
}

/// Signed angle from `a` to `b` in (−π, π].
pub fn angle_between(a: P2, b: P2) -> f64 {
    cross(a, b).atan2(dot(a, b))
}

/// Orientation of `c` relative to the directed line `a→b` (positive = left).
pub fn orient(a: P2, b: P2, c: P2) -> f64 {
    cross(sub(b, a), sub(c, a))
}

/// Interior angle opposite side `c` in a triangle with sides `a`, `b`, `c`.
///
/// Law of cosines for the cosine, with the sine taken from a cancellation-free
/// area so that angles near 0 and π keep full relative accuracy.
pub fn angle_from_sides(a: f64, b: f64, c: f64) -> f64 {
    let area4 = 4.0 * triangle_area(a, b, c);
    area4.atan2(a * a + b * b - c * c)
}

/// Triangle area from side lengths, in the numerically stable arrangement.
pub fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// Point where segment or ray `p + s·d` (s ≥ 0) meets the line through `a`, `b`;
/// returns `(s, t)` with the hit at `a + t·(b − a)`.
pub fn ray_line(p: P2, d: P2, a: P2, b: P2) -> Option<(f64, f64)> {
    let e = sub(b, a);
    let den = cross(d, e);
    if den.abs() < 1e-300 {
        return None;
    }
    let w = sub(a, p);
    Some((cross(w, e) / den, cross(w, d) / den))
}

/// Distance from `q` to the segment `ab`.
pub fn point_segment_distance(q: P2, a: P2, b: P2) -> f64 {
    let e = sub(b, a);
    let l2 = dot(e, e);
    if l2 == 0.0 {
        return dist(q, a);
    }
    let t = (dot(sub(q, a), e) / l2).clamp(0.0, 1.0);
    dist(q, lerp(a, b, t))
}

/// Convex hull by the monotone chain, counterclockwise, without repeated or
/// collinear vertices. Degenerate inputs give one or two vertices.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| dist(*a, *b) <= 1e-12);
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-15 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        hull = vec![pts[0], *pts.last().unwrap()];
    }
    hull
}

/// Distance from `q` to a convex polygon (0 inside), vertices counterclockwise.
pub fn polygon_distance(poly: &[P2], q: P2) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => dist(poly[0], q),
        2 => point_segment_distance(q, poly[0], poly[1]),
        n => {
            let inside = (0..n).all(|i| orient(poly[i], poly[(i + 1) % n], q) >= 0.0);
            if inside {
                0.0
            } else {
                (0..n).map(|i| point_segment_distance(q, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Distance from `q` to the boundary of a convex polygon, negative outside.
pub fn polygon_depth(poly: &[P2], q: P2) -> f64 {
    if poly.len() < 3 {
        return -polygon_distance(poly, q);
    }
    let d = polygon_distance(poly, q);
    if d > 0.0 {
        return -d;
    }
    let n = poly.len();
    (0..n).map(|i| point_segment_distance(q, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Orthogonal affine map `x ↦ m·x + t` (rotation, possibly composed with a reflection).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iso2 {
    pub m: [[f64; 2]; 2],
    pub t: P2,
}

impl Iso2 {
    pub const IDENTITY: Iso2 = Iso2 { m: [[1.0, 0.0], [0.0, 1.0]], t: [0.0, 0.0] };

    pub fn apply(&self, p: P2) -> P2 {
        [
            self.m[0][0] * p[0] + self.m[0][1] * p[1] + self.t[0],
            self.m[1][0] * p[0] + self.m[1][1] * p[1] + self.t[1],
        ]
    }

    pub fn apply_vec(&self, v: P2) -> P2 {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    pub fn inverse(&self) -> Iso2 {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let t = [
            -(mt[0][0] * self.t[0] + mt[0][1] * self.t[1]),
            -(mt[1][0] * self.t[0] + mt[1][1] * self.t[1]),
        ];
        Iso2 { m: mt, t }
    }

    pub fn is_reflection(&self) -> bool {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0] < 0.0
    }

    pub fn rotation(theta: f64) -> Iso2 {
        let (s, c) = theta.sin_cos();
        Iso2 { m: [[c, -s], [s, c]], t: [0.0, 0.0] }
    }

    /// The motion sending `a0→a1` and `b0→b1` (|a0b0| = |a1b1|), reflecting when asked.
    pub fn from_segments(a0: P2, b0: P2, a1: P2, b1: P2, reflect: bool) -> Iso2 {
        let u0 = sub(b0, a0);
        let u1 = sub(b1, a1);
        let l0 = norm(u0);
        let l1 = norm(u1);
        let (c0, s0) = (u0[0] / l0, u0[1] / l0);
        let (c1, s1) = (u1[0] / l1, u1[1] / l1);
        // Rotate u0 onto +x, optionally flip y, then rotate +x onto u1.
        let r0 = [[c0, s0], [-s0, c0]];
        let f = if reflect { -1.0 } else { 1.0 };
        let r1 = [[c1, -s1], [s1, c1]];
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = r1[i][0] * r0[0][j] + r1[i][1] * f * r0[1][j];
            }
        }
        let ma0 = [m[0][0] * a0[0] + m[0][1] * a0[1], m[1][0] * a0[0] + m[1][1] * a0[1]];
        Iso2 { m, t: sub(a1, ma0) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_angle_from_sides() {
        let a = angle_from_sides(3.0, 4.0, 5.0);
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn near_flat_angle_keeps_precision() {
        let d = 1e-4_f64;
        let a = 1.0;
        let b = 2.0;
        let c = (a * a + b * b - 2.0 * a * b * (std::f64::consts::PI - d).cos()).sqrt();
        let got = angle_from_sides(a, b, c);
        assert!(((std::f64::consts::PI - got) - d).abs() < 1e-10);
    }

    #[test]
    fn segment_motion_maps_endpoints() {
        for reflect in [false, true] {
            let m = Iso2::from_segments([0.0, 0.0], [1.0, 0.0], [2.0, 1.0], [2.0, 2.0], reflect);
            let a = m.apply([0.0, 0.0]);
            let b = m.apply([1.0, 0.0]);
            assert!(dist(a, [2.0, 1.0]) < 1e-15 && dist(b, [2.0, 2.0]) < 1e-15);
            assert_eq!(m.is_reflection(), reflect);
            let back = m.inverse().apply(m.apply([0.3, 0.7]));
            assert!(dist(back, [0.3, 0.7]) < 1e-15);
        }
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(polygon_distance(&h, [0.3, 0.3]), 0.0);
        assert!((polygon_distance(&h, [2.0, 0.5]) - 1.0).abs() < 1e-15);
        assert!((polygon_depth(&h, [0.5, 0.25]) - 0.25).abs() < 1e-15);
        assert_eq!(convex_hull(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]), vec![[1.0, 1.0], [3.0, 3.0]]);
    }
}
