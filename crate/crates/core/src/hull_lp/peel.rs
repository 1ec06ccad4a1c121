//! Membership queries and hull peeling.

use std::f64::consts::FRAC_PI_2;

use super::{solve_hull, HullResult};
use crate::complex_core::{LinkPoint, TOL};
use crate::error::Result;
use crate::geom;
use crate::single_vertex::{ConePoint, SingleVertexComplex};

impl HullResult {
    /// Boundary inclusive, within the default tolerance.
    pub fn contains(&self, c: &SingleVertexComplex, q: &ConePoint) -> bool {
        if q.is_origin() {
            return self.origin_in_hull;
        }
        self.cells.iter().any(|cell| q.in_cone(c, cell.index).is_some_and(|p| geom::polygon_distance(&cell.polygon, p) <= TOL))
    }

    /// Whether a hull point lies on the hull's topological boundary.
    pub fn on_boundary(&self, c: &SingleVertexComplex, q: &ConePoint) -> bool {
        match q.direction(c) {
            None => {
                let full = (0..c.rays.len())
                    .filter(|&r| !c.cones_at(r).is_empty())
                    .all(|r| self.crossing(&c.rays[r]).is_some_and(|x| x.x_max > 0.0));
                !(self.origin_in_hull && full)
            }
            Some(LinkPoint::Arc { arc, .. }) => {
                let Some(cell) = self.cell(arc) else { return true };
                geom::polygon_depth(&cell.polygon, q.in_cone(c, arc).unwrap()) <= TOL
            }
            Some(LinkPoint::Node(r)) => {
                let rho = q.radius();
                let Some(x) = self.crossing(&c.rays[r]) else { return true };
                if !(rho > x.x_min + TOL && rho < x.x_max - TOL) {
                    return true;
                }
                let delta = 1e-6 * rho.max(1.0);
                c.cones_at(r).iter().any(|&j| {
                    let Some(cell) = self.cell(j) else { return true };
                    let cn = &c.cones[j];
                    let (at, inward) = if cn.rays[0] == r { (0.0, FRAC_PI_2) } else { (cn.angle, cn.angle - FRAC_PI_2) };
                    let probe = geom::add(geom::polar(rho, at), geom::polar(delta, inward));
                    geom::polygon_distance(&cell.polygon, probe) > 1e-12 * rho.max(1.0)
                })
            }
        }
    }
}

pub fn membership(c: &SingleVertexComplex, pts: &[ConePoint], q: &ConePoint) -> Result<bool> {
    c.check_point(q)?;
    Ok(solve_hull(c, pts)?.contains(c, q))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeelStop {
    /// Peel only while at least this fraction of the points remains.
    Fraction(f64),
    /// Peel at most this many layers.
    Rounds(usize),
    /// Peel until no points remain.
    Exhaust,
}

/// Layers of point indices, outermost first.
pub fn peel(c: &SingleVertexComplex, pts: &[ConePoint], stop: PeelStop) -> Result<Vec<Vec<usize>>> {
    let n = pts.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while !remaining.is_empty() {
        if let PeelStop::Rounds(k) = stop {
            if layers.len() >= k {
                break;
            }
        }
        let sub: Vec<ConePoint> = remaining.iter().map(|&i| pts[i]).collect();
        let hull = solve_hull(c, &sub)?;
        let mut layer: Vec<usize> = remaining.iter().copied().filter(|&i| hull.on_boundary(c, &pts[i])).collect();
        if layer.is_empty() {
            // Every hull of finitely many points has a boundary point of P.
            layer = remaining.clone();
        }
        if let PeelStop::Fraction(f) = stop {
            if ((remaining.len() - layer.len()) as f64) < f * n as f64 {
                break;
            }
        }
        remaining.retain(|i| !layer.contains(i));
        layers.push(layer);
    }
    Ok(layers)
}
