//! Convex hulls of finite point sets in single-vertex complexes.
//!
//! The hull meets every ray in a segment. With `x_ℓ` the far end of that
//! segment and `y_ℓ = 1/x_ℓ`, each geodesic between two hull points crossing a
//! ray gives a linear bound on `y_ℓ`, and the hull is the optimum of the
//! resulting linear program. When the origin is outside the hull each ray
//! carries both ends of its segment.

mod cube;
mod oracle;
mod peel;

use std::collections::HashMap;
use std::f64::consts::PI;

use log::{debug, warn};
use num::BigRational;
use serde::Serialize;

use crate::complex_core::LinkPoint;
use crate::error::{Error, Result};
use crate::geom::{self, P2};
use crate::simplex::{self, LinearProgram, LpStatus, Relation, Scalar, SimplexError};
use crate::single_vertex::{hull_edge_support, origin_in_hull, short_paths, ConePoint, SingleVertexComplex};

pub use oracle::{iterative_hull_oracle, OracleResult};
pub use peel::{membership, peel, PeelStop};

/// Where a ray of an augmented complex came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RayOrigin {
    Original(usize),
    Inserted { cone: usize, offset: f64 },
}

/// A complex with one extra ray through every point of `P` interior to a cone.
#[derive(Debug, Clone)]
pub struct AugmentedComplex {
    pub complex: SingleVertexComplex,
    pub ray_origin: Vec<RayOrigin>,
    /// Per cone of the augmented complex: the original cone and the offset of its first ray.
    pub cone_origin: Vec<(usize, f64)>,
    /// `P` with every point on a ray (or the origin).
    pub points: Vec<ConePoint>,
}

/// Placements of ray `r` of a complex derived from `c` as `(cone of c, angle)`.
fn placements(c: &SingleVertexComplex, origin: RayOrigin) -> Vec<(usize, f64)> {
    match origin {
        RayOrigin::Inserted { cone, offset } => vec![(cone, offset)],
        RayOrigin::Original(r) => c
            .cones_at(r)
            .iter()
            .map(|&j| {
                let cn = &c.cones[j];
                (j, if cn.rays[0] == r { 0.0 } else { cn.angle })
            })
            .collect(),
    }
}

pub fn augment(c: &SingleVertexComplex, pts: &[ConePoint]) -> AugmentedComplex {
    let mut inserts: Vec<Vec<f64>> = vec![Vec::new(); c.cones.len()];
    for p in pts {
        if let Some(LinkPoint::Arc { arc, offset }) = p.direction(c) {
            inserts[arc].push(offset);
        }
    }
    for v in &mut inserts {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    }

    let mut rays = c.rays.clone();
    let mut ray_origin: Vec<RayOrigin> = (0..rays.len()).map(RayOrigin::Original).collect();
    let mut inserted_at: HashMap<usize, Vec<(f64, usize)>> = HashMap::new();
    let mut cones = Vec::new();
    let mut cone_origin = Vec::new();
    for (j, cone) in c.cones.iter().enumerate() {
        let mut ids = vec![c.rays[cone.rays[0]].clone()];
        let mut offs = vec![0.0];
        for (k, &o) in inserts[j].iter().enumerate() {
            let mut id = format!("{}@{}", cone.id, k + 1);
            while c.ray_index(&id).is_some() {
                id.push('\'');
            }
            inserted_at.entry(j).or_default().push((o, rays.len()));
            rays.push(id.clone());
            ray_origin.push(RayOrigin::Inserted { cone: j, offset: o });
            ids.push(id);
            offs.push(o);
        }
        ids.push(c.rays[cone.rays[1]].clone());
        offs.push(cone.angle);
        let split = ids.len() > 2;
        for i in 0..ids.len() - 1 {
            let id = if split { format!("{}/{}", cone.id, i) } else { cone.id.clone() };
            cones.push((id, [ids[i].clone(), ids[i + 1].clone()], offs[i + 1] - offs[i]));
            cone_origin.push((j, offs[i]));
        }
    }
    let complex = SingleVertexComplex::build(rays, cones).expect("splitting cones keeps ids unique");
    let points = pts
        .iter()
        .map(|p| match p.direction(c) {
            None => ConePoint::Origin,
            Some(LinkPoint::Node(ray)) => ConePoint::OnRay { ray, radius: p.radius() },
            Some(LinkPoint::Arc { arc, offset }) => {
                let ray = inserted_at[&arc]
                    .iter()
                    .find(|&&(o, _)| (o - offset).abs() <= 1e-12)
                    .map(|&(_, r)| r)
                    .expect("every interior direction got a ray");
                ConePoint::OnRay { ray, radius: p.radius() }
            }
        })
        .collect();
    AugmentedComplex { complex, ray_origin, cone_origin, points }
}

/// Distance from `O` at which the segment from `x_e` on ray `e` to `x_f` on ray
/// `f` crosses a ray `ℓ` lying between them, `γ1` from `e` and `γ2` from `f`.
pub fn crossing_formula(x_e: f64, x_f: f64, gamma1: f64, gamma2: f64) -> Result<f64> {
    if !(x_e > 0.0 && x_f > 0.0 && gamma1 > 0.0 && gamma2 > 0.0 && gamma1 + gamma2 < PI) {
        return Err(Error::Domain(format!(
            "crossing needs positive radii and angles with sum below pi, got x_e={x_e} x_f={x_f} g1={gamma1} g2={gamma2}"
        )));
    }
    Ok(x_e * x_f * (gamma1 + gamma2).sin() / (x_e * gamma1.sin() + x_f * gamma2.sin()))
}

/// What generated an inequality. Ray and point indices refer to the working
/// complex and to `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RowSource {
    /// `x_ℓ` at least the radius of a point on `ℓ`.
    Point { point: usize },
    /// The chord between the hull points on rays `e` and `f`.
    RayPair { e: usize, f: usize, gamma1: f64, gamma2: f64 },
    /// The chord from a quadrant point `(h, v)` to ray `f`.
    PointRay { point: usize, f: usize, h: f64, v: f64 },
    /// The chord between two quadrant points.
    PointPair { p: usize, q: usize },
}

/// `y_target ≤ Σ coeff·y_k + constant`, indices into the support list.
#[derive(Debug, Clone, PartialEq)]
pub struct HullRow<T> {
    pub target: usize,
    pub terms: Vec<(usize, T)>,
    pub constant: T,
    pub source: RowSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullLp<T> {
    /// Rays carrying variables, as ray indices of the working complex.
    pub support: Vec<usize>,
    /// Separate variables for both segment ends (origin outside the hull).
    pub paired: bool,
    pub rows: Vec<HullRow<T>>,
}

impl<T: Scalar> HullLp<T> {
    pub fn num_vars(&self) -> usize {
        self.support.len() * if self.paired { 2 } else { 1 }
    }

    /// Maximize `Σ y_ℓ`; in paired form maximize `Σ (y^max_ℓ − y^min_ℓ)` with
    /// every row imposed as `≤` on the max variables and `≥` on the min ones.
    pub fn program(&self) -> LinearProgram<T> {
        let n = self.num_vars();
        let (stride, objective) = if self.paired {
            (2, (0..n).map(|i| if i % 2 == 0 { T::one() } else { T::one().neg() }).collect())
        } else {
            (1, vec![T::one(); n])
        };
        let mut lp = LinearProgram::new(objective);
        let shifts: &[(usize, Relation)] =
            if self.paired { &[(0, Relation::Le), (1, Relation::Ge)] } else { &[(0, Relation::Le)] };
        for row in &self.rows {
            for &(shift, rel) in shifts {
                let mut a = vec![T::zero(); n];
                a[stride * row.target + shift] = T::one();
                for (k, c) in &row.terms {
                    let i = stride * k + shift;
                    a[i] = a[i].sub(c);
                }
                lp.push(a, rel, row.constant.clone());
            }
        }
        if self.paired {
            for j in 0..self.support.len() {
                let mut a = vec![T::zero(); n];
                a[2 * j] = T::one();
                a[2 * j + 1] = T::one().neg();
                lp.push(a, Relation::Le, T::zero());
            }
        }
        lp
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> HullLp<U> {
        HullLp {
            support: self.support.clone(),
            paired: self.paired,
            rows: self
                .rows
                .iter()
                .map(|r| HullRow {
                    target: r.target,
                    terms: r.terms.iter().map(|(k, c)| (*k, f(c))).collect(),
                    constant: f(&r.constant),
                    source: r.source.clone(),
                })
                .collect(),
        }
    }
}

fn slots(support: &[usize]) -> HashMap<usize, usize> {
    support.iter().enumerate().map(|(i, &r)| (r, i)).collect()
}

/// Point rows and sine-law rows for a complex whose points all lie on rays.
fn general_rows(c: &SingleVertexComplex, pts: &[ConePoint], support: &[usize]) -> Vec<HullRow<f64>> {
    let slot = slots(support);
    let mut rows = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if let ConePoint::OnRay { ray, radius } = *p {
            if let Some(&t) = slot.get(&ray) {
                rows.push(HullRow { target: t, terms: Vec::new(), constant: 1.0 / radius, source: RowSource::Point { point: i } });
            }
        }
    }
    for a in 0..support.len() {
        for b in a + 1..support.len() {
            let (e, f) = (support[a], support[b]);
            for path in short_paths(&c.link, LinkPoint::Node(e), LinkPoint::Node(f)) {
                let d = path.length;
                let s = d.sin();
                for (n, phi) in path.interior_nodes() {
                    if phi <= 0.0 || phi >= d {
                        continue;
                    }
                    let Some(&t) = slot.get(&c.link.nodes[n]) else {
                        debug!("ray {} crossed by a support pair lies outside the support", c.rays[n]);
                        continue;
                    };
                    rows.push(HullRow {
                        target: t,
                        terms: vec![(b, phi.sin() / s), (a, (d - phi).sin() / s)],
                        constant: 0.0,
                        source: RowSource::RayPair { e, f, gamma1: phi, gamma2: d - phi },
                    });
                }
            }
        }
    }
    rows
}

pub fn build_lp_origin_inside(ac: &AugmentedComplex, support: &[usize]) -> HullLp<f64> {
    HullLp { support: support.to_vec(), paired: false, rows: general_rows(&ac.complex, &ac.points, support) }
}

pub fn build_lp_origin_outside(ac: &AugmentedComplex, support: &[usize]) -> HullLp<f64> {
    HullLp { support: support.to_vec(), paired: true, rows: general_rows(&ac.complex, &ac.points, support) }
}

/// Exact LP for a complex whose cones are all right angles; points inside
/// quadrants are kept as points instead of inserting rays.
pub fn build_lp_cube(c: &SingleVertexComplex, pts: &[ConePoint], support: &[usize], paired: bool) -> HullLp<BigRational> {
    HullLp { support: support.to_vec(), paired, rows: cube::cube_rows(c, pts, support) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arith {
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HullOptions {
    /// Defaults to rational on right-angled complexes and float elsewhere.
    pub arith: Option<Arith>,
    /// Use the general ray-inserting construction even on right-angled complexes.
    pub force_general: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayCrossing {
    pub ray: String,
    pub x_min: f64,
    #[serde(rename = "x")]
    pub x_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullCell {
    pub cone: String,
    #[serde(skip)]
    pub index: usize,
    /// Counterclockwise, in the cone's local frame.
    pub polygon: Vec<P2>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpStats {
    pub vars: usize,
    pub rows: usize,
    pub pivots: usize,
    pub arith: Arith,
    pub bland: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullResult {
    pub origin_in_hull: bool,
    pub crossings: Vec<RayCrossing>,
    pub cells: Vec<HullCell>,
    /// Rays carrying LP variables.
    pub support: Vec<String>,
    pub lp_stats: Option<LpStats>,
}

impl HullResult {
    pub fn crossing(&self, ray: &str) -> Option<&RayCrossing> {
        self.crossings.iter().find(|x| x.ray == ray)
    }

    pub fn cell(&self, cone: usize) -> Option<&HullCell> {
        self.cells.iter().find(|x| x.index == cone)
    }
}

pub fn solve_hull(c: &SingleVertexComplex, pts: &[ConePoint]) -> Result<HullResult> {
    solve_hull_with(c, pts, HullOptions::default())
}

pub fn solve_hull_with(c: &SingleVertexComplex, pts: &[ConePoint], opts: HullOptions) -> Result<HullResult> {
    if pts.is_empty() {
        return Err(Error::MalformedInput("hull of an empty point set".into()));
    }
    for p in pts {
        c.check_point(p)?;
    }
    if pts.iter().all(ConePoint::is_origin) {
        return Ok(HullResult { origin_in_hull: true, crossings: Vec::new(), cells: Vec::new(), support: Vec::new(), lp_stats: None });
    }
    // A single point is its own hull.
    if pts.len() == 1 {
        let p = pts[0];
        let crossings = match p {
            ConePoint::OnRay { ray, radius } => vec![RayCrossing { ray: c.rays[ray].clone(), x_min: radius, x_max: radius }],
            _ => Vec::new(),
        };
        let cells = (0..c.cones.len())
            .filter_map(|j| p.in_cone(c, j).map(|q| HullCell { cone: c.cones[j].id.clone(), index: j, polygon: vec![q] }))
            .collect();
        return Ok(HullResult { origin_in_hull: false, crossings, cells, support: Vec::new(), lp_stats: None });
    }

    let inside = origin_in_hull(c, pts).in_hull;
    let cube = c.is_cube() && !opts.force_general;
    let arith = opts.arith.unwrap_or(if cube { Arith::Rational } else { Arith::Float });

    // Working complex, its rays' placements in `c`, and points kept off rays.
    let (working, origins, support, extra, (y, stats)) = if cube {
        let support: Vec<usize> = hull_edge_support(c, pts).into_iter().collect();
        let lp = build_lp_cube(c, pts, &support, !inside);
        let out = match arith {
            Arith::Rational => run_rational(&lp)?,
            Arith::Float => run_float(&lp.map(Scalar::to_f64), Some(&lp))?,
        };
        let extra: Vec<(usize, P2)> = pts
            .iter()
            .filter_map(|p| match p.direction(c) {
                Some(LinkPoint::Arc { arc, .. }) => p.in_cone(c, arc).map(|q| (arc, q)),
                _ => None,
            })
            .collect();
        let origins = (0..c.rays.len()).map(RayOrigin::Original).collect();
        (None, origins, support, extra, out)
    } else {
        let ac = augment(c, pts);
        let support: Vec<usize> = hull_edge_support(&ac.complex, &ac.points).into_iter().collect();
        let lp = if inside { build_lp_origin_inside(&ac, &support) } else { build_lp_origin_outside(&ac, &support) };
        let out = match arith {
            Arith::Float => run_float(&lp, None)?,
            Arith::Rational => run_rational(&lp.map(|&v| BigRational::from_float(v).expect("finite coefficients")))?,
        };
        let origins = ac.ray_origin.clone();
        (Some(ac), origins, support, Vec::new(), out)
    };
    let ray_ids = |r: usize| match &working {
        Some(ac) => ac.complex.rays[r].clone(),
        None => c.rays[r].clone(),
    };

    let mut crossings = Vec::new();
    let mut segments = Vec::new();
    for (j, &r) in support.iter().enumerate() {
        let (lo, hi) = if inside { (None, y[j]) } else { (Some(y[2 * j + 1]), y[2 * j]) };
        if !(hi > 0.0) || lo.is_some_and(|v| !(v > 0.0)) {
            return Err(Error::Internal(format!("LP places the hull on ray {} at infinity", ray_ids(r))));
        }
        let x_max = 1.0 / hi;
        let x_min = lo.map_or(0.0, |v| 1.0 / v);
        crossings.push(RayCrossing { ray: ray_ids(r), x_min, x_max });
        segments.push((placements(c, origins[r]), x_min, x_max));
    }
    let cells = assemble_cells(c, inside, &segments, &extra);
    Ok(HullResult {
        origin_in_hull: inside,
        crossings,
        cells,
        support: support.iter().map(|&r| ray_ids(r)).collect(),
        lp_stats: Some(stats),
    })
}

fn stats_of<T>(lp: &LinearProgram<T>, sol: &simplex::LpSolution<T>, arith: Arith) -> LpStats {
    LpStats { vars: lp.objective.len(), rows: lp.rows.len(), pivots: sol.pivots, arith, bland: sol.bland }
}

fn check_status(status: LpStatus) -> Result<()> {
    match status {
        LpStatus::Optimal => Ok(()),
        LpStatus::Infeasible => Err(Error::LpInfeasible),
        LpStatus::Unbounded => Err(Error::LpUnbounded),
    }
}

fn run_rational(lp: &HullLp<BigRational>) -> Result<(Vec<f64>, LpStats)> {
    let prog = lp.program();
    let sol = simplex::solve(&prog)?;
    check_status(sol.status)?;
    Ok((sol.point.iter().map(Scalar::to_f64).collect(), stats_of(&prog, &sol, Arith::Rational)))
}

/// Float solve, retried exactly when the tableau breaks down.
fn run_float(lp: &HullLp<f64>, exact: Option<&HullLp<BigRational>>) -> Result<(Vec<f64>, LpStats)> {
    let prog = lp.program();
    match simplex::solve(&prog) {
        Ok(sol) => {
            check_status(sol.status)?;
            Ok((sol.point.clone(), stats_of(&prog, &sol, Arith::Float)))
        }
        Err(SimplexError::NumericalBreakdown) => {
            warn!("float simplex broke down; retrying with rational arithmetic");
            match exact {
                Some(q) => run_rational(q),
                None => run_rational(&lp.map(|&v| BigRational::from_float(v).expect("finite coefficients"))),
            }
        }
        Err(e) => Err(e.into()),
    }
}

/// Per-cone polygons: the planar hull of the origin (when inside), the ray
/// segments bounding or crossing the cone, and the points kept inside it.
fn assemble_cells(
    c: &SingleVertexComplex,
    inside: bool,
    segments: &[(Vec<(usize, f64)>, f64, f64)],
    extra: &[(usize, P2)],
) -> Vec<HullCell> {
    let mut pts: Vec<Vec<P2>> = vec![Vec::new(); c.cones.len()];
    if inside {
        for v in &mut pts {
            v.push([0.0, 0.0]);
        }
    }
    for (places, lo, hi) in segments {
        for &(j, ang) in places {
            pts[j].push(geom::polar(*lo, ang));
            pts[j].push(geom::polar(*hi, ang));
        }
    }
    for &(j, q) in extra {
        pts[j].push(q);
    }
    pts.into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(j, v)| HullCell { cone: c.cones[j].id.clone(), index: j, polygon: geom::convex_hull(&v) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn fan(angles: &[f64]) -> SingleVertexComplex {
        let rays = (0..=angles.len()).map(|i| format!("r{i}")).collect();
        let cones = angles
            .iter()
            .enumerate()
            .map(|(i, &a)| (format!("c{i}"), [format!("r{i}"), format!("r{}", i + 1)], a))
            .collect();
        SingleVertexComplex::new(rays, cones).unwrap()
    }

    #[test]
    fn augment_splits_cone() {
        let c = fan(&[1.0]);
        let p = ConePoint::InCone { cone: 0, angle: 0.3, radius: 2.0 };
        let q = ConePoint::InCone { cone: 0, angle: 0.3, radius: 1.0 };
        let ac = augment(&c, &[p, q]);
        assert_eq!(ac.complex.rays.len(), 3);
        let angles: Vec<f64> = ac.complex.cones.iter().map(|k| k.angle).collect();
        assert!((angles[0] - 0.3).abs() < 1e-15 && (angles[1] - 0.7).abs() < 1e-15);
        assert_eq!(ac.points[0], ConePoint::OnRay { ray: 2, radius: 2.0 });
        assert_eq!(ac.points[1], ConePoint::OnRay { ray: 2, radius: 1.0 });
    }

    #[test]
    fn crossing_formula_cases() {
        let t = crossing_formula(1.0, 1.0, PI / 4.0, PI / 4.0).unwrap();
        assert!((t - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(crossing_formula(1.0, 1.0, 2.0, 1.2).is_err());
    }

    #[test]
    fn two_points_on_one_cone() {
        let c = fan(&[FRAC_PI_2]);
        let pts = [ConePoint::OnRay { ray: 0, radius: 1.0 }, ConePoint::OnRay { ray: 1, radius: 2.0 }];
        let h = solve_hull(&c, &pts).unwrap();
        assert!(!h.origin_in_hull);
        assert_eq!(h.crossing("r0").unwrap().x_max, 1.0);
        assert_eq!(h.crossing("r1").unwrap().x_min, 2.0);
        assert_eq!(h.cells[0].polygon.len(), 2);
    }

    #[test]
    fn chord_across_a_ray() {
        let c = fan(&[0.8, 0.9]);
        let pts = [ConePoint::OnRay { ray: 0, radius: 1.0 }, ConePoint::OnRay { ray: 2, radius: 1.5 }];
        let h = solve_hull_with(&c, &pts, HullOptions { arith: Some(Arith::Float), ..Default::default() }).unwrap();
        let want = crossing_formula(1.0, 1.5, 0.8, 0.9).unwrap();
        let got = h.crossing("r1").unwrap();
        assert!((got.x_max - want).abs() < 1e-12 && (got.x_min - want).abs() < 1e-12);
    }
}
