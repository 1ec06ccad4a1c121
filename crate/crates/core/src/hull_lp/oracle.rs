//! Iterated closure: repeatedly add every crossing of a geodesic between
//! current hull points with a ray, keeping only the extreme crossing on each
//! side of every ray.

use std::collections::HashMap;

use super::{augment, RayCrossing};
use crate::complex_core::LinkPoint;
use crate::single_vertex::{chord_crossing, link_distance, short_paths, ConePoint, LinkDist, SingleVertexComplex};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub converged: bool,
    pub rounds: usize,
    pub origin_in_hull: bool,
    /// Keyed by the rays of the augmented complex.
    pub crossings: Vec<RayCrossing>,
}

impl OracleResult {
    pub fn crossing(&self, ray: &str) -> Option<&RayCrossing> {
        self.crossings.iter().find(|x| x.ray == ray)
    }
}

/// Link paths between two rays as `(length, [(crossed ray, angle from the first)])`,
/// or `None` at distance at least π.
type Paths = Option<Vec<(f64, Vec<(usize, f64)>)>>;

fn paths_between(c: &SingleVertexComplex, a: usize, b: usize) -> Paths {
    let (pa, pb) = (LinkPoint::Node(a), LinkPoint::Node(b));
    if link_distance(&c.link, pa, pb) == LinkDist::AtLeastPi {
        return None;
    }
    Some(
        short_paths(&c.link, pa, pb)
            .into_iter()
            .map(|p| {
                let d = p.length;
                let nodes =
                    p.interior_nodes().into_iter().filter(|&(_, phi)| phi > 0.0 && phi < d).map(|(n, phi)| (c.link.nodes[n], phi)).collect();
                (d, nodes)
            })
            .collect(),
    )
}

fn widen(slot: &mut Option<(f64, f64)>, t: f64) {
    *slot = Some(match *slot {
        None => (t, t),
        Some((lo, hi)) => (lo.min(t), hi.max(t)),
    });
}

pub fn iterative_hull_oracle(c: &SingleVertexComplex, pts: &[ConePoint], eps: f64, max_rounds: usize) -> OracleResult {
    let ac = augment(c, pts);
    let g = &ac.complex;
    let mut ext: Vec<Option<(f64, f64)>> = vec![None; g.rays.len()];
    let mut origin = false;
    for p in &ac.points {
        match *p {
            ConePoint::OnRay { ray, radius } => widen(&mut ext[ray], radius),
            _ => origin = true,
        }
    }
    let mut cache: HashMap<(usize, usize), Paths> = HashMap::new();
    let mut converged = false;
    let mut rounds = 0;
    while rounds < max_rounds && !converged {
        rounds += 1;
        let mut items: Vec<(usize, f64)> = Vec::new();
        for (r, e) in ext.iter().enumerate() {
            if let Some((lo, hi)) = *e {
                if lo > 0.0 && lo < hi {
                    items.push((r, lo));
                }
                items.push((r, hi));
            }
        }
        let mut next = ext.clone();
        let mut next_origin = origin;
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                let ((ra, xa), (rb, xb)) = (items[i], items[j]);
                if ra == rb {
                    continue;
                }
                let (lo, hi, xlo, xhi) = if ra < rb { (ra, rb, xa, xb) } else { (rb, ra, xb, xa) };
                match cache.entry((lo, hi)).or_insert_with(|| paths_between(g, lo, hi)) {
                    None => next_origin = true,
                    Some(list) => {
                        for (d, nodes) in list.iter() {
                            for &(n, phi) in nodes {
                                widen(&mut next[n], chord_crossing(xlo, xhi, *d, phi));
                            }
                        }
                    }
                }
            }
        }
        if next_origin {
            for e in next.iter_mut().flatten() {
                e.0 = 0.0;
            }
        }
        let delta = ext
            .iter()
            .zip(&next)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => (a.0 - b.0).abs().max((a.1 - b.1).abs()),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        converged = delta < eps && next_origin == origin;
        ext = next;
        origin = next_origin;
    }
    let crossings = ext
        .iter()
        .enumerate()
        .filter_map(|(r, e)| e.map(|(lo, hi)| RayCrossing { ray: g.rays[r].clone(), x_min: lo, x_max: hi }))
        .collect();
    OracleResult { converged, rounds, origin_in_hull: origin, crossings }
}
