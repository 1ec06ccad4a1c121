//! BHV tree space on five leaves as a right-angled cone complex whose link at
//! the origin is the Petersen graph.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex_core::LinkGraph;
use crate::error::{Error, Result};
use crate::single_vertex::{geodesic, ConePoint, SingleVertexComplex};

const LEAVES: u8 = 0b11111;

/// A bipartition of {1..5} into sides of size at least 2, stored as the
/// bitmask of the side containing leaf 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Split(u8);

impl Split {
    pub fn from_side(side: u8) -> Result<Split> {
        let side = side & LEAVES;
        let n = side.count_ones();
        if !(2..=3).contains(&n) {
            return Err(Error::MalformedInput(format!("split side {side:05b} must have 2 or 3 leaves")));
        }
        Ok(Split(if side & 1 == 1 { side } else { LEAVES & !side }))
    }

    /// All ten splits, ordered by their two-leaf side.
    pub fn all() -> Vec<Split> {
        let mut out = Vec::new();
        for i in 0..5u8 {
            for j in i + 1..5 {
                out.push(Split::from_side((1 << i) | (1 << j)).unwrap());
            }
        }
        out
    }

    /// The two-leaf side.
    pub fn small_side(&self) -> u8 {
        if self.0.count_ones() == 2 {
            self.0
        } else {
            LEAVES & !self.0
        }
    }
}

fn leaves(mask: u8) -> String {
    (0..5).filter(|i| mask >> i & 1 == 1).map(|i| char::from(b'1' + i)).collect()
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", leaves(self.0), leaves(LEAVES & !self.0))
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Split> {
        let bad = || Error::MalformedInput(format!("bad split {s:?}"));
        let (l, r) = s.split_once('|').ok_or_else(bad)?;
        let mask = |part: &str| -> Result<u8> {
            let mut m = 0u8;
            for ch in part.chars() {
                let d = ch.to_digit(10).filter(|d| (1..=5).contains(d)).ok_or_else(bad)?;
                let bit = 1 << (d - 1);
                if m & bit != 0 {
                    return Err(bad());
                }
                m |= bit;
            }
            Ok(m)
        };
        let (a, b) = (mask(l)?, mask(r)?);
        if a & b != 0 || a | b != LEAVES {
            return Err(bad());
        }
        Split::from_side(a)
    }
}

/// Two distinct splits are compatible iff some side of one is disjoint from
/// some side of the other.
pub fn splits_compatible(s1: Split, s2: Split) -> Result<bool> {
    if s1 == s2 {
        return Err(Error::Domain("compatibility needs two distinct splits".into()));
    }
    let sides = |s: Split| [s.0, LEAVES & !s.0];
    Ok(sides(s1).iter().any(|a| sides(s2).iter().any(|b| a & b == 0)))
}

/// A tree with up to two interior edges, given by their splits and lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tree5 {
    pub splits: Vec<(Split, f64)>,
}

pub fn build_t5() -> SingleVertexComplex {
    let splits = Split::all();
    let rays: Vec<String> = splits.iter().map(|s| s.to_string()).collect();
    let mut cones = Vec::new();
    for i in 0..splits.len() {
        for j in i + 1..splits.len() {
            if splits_compatible(splits[i], splits[j]).unwrap() {
                cones.push((format!("{}+{}", rays[i], rays[j]), [rays[i].clone(), rays[j].clone()], FRAC_PI_2));
            }
        }
    }
    SingleVertexComplex::new(rays, cones).expect("T5 satisfies the link condition")
}

/// The point of `t5` representing `t`. Zero lengths collapse onto a ray or the origin.
pub fn tree_to_point(t5: &SingleVertexComplex, t: &Tree5) -> Result<ConePoint> {
    if t.splits.len() > 2 {
        return Err(Error::MalformedInput("a 5-leaf tree has at most two interior edges".into()));
    }
    if t.splits.iter().any(|&(_, l)| !(l >= 0.0 && l.is_finite())) {
        return Err(Error::MalformedInput("edge lengths must be nonnegative".into()));
    }
    let ray_of = |s: Split| t5.ray_index(&s.to_string()).unwrap();
    if let [(a, _), (b, _)] = t.splits[..] {
        if a == b || !splits_compatible(a, b)? {
            return Err(Error::IncompatibleSplits(a.to_string(), b.to_string()));
        }
    }
    let positive: Vec<(Split, f64)> = t.splits.iter().copied().filter(|&(_, l)| l > 0.0).collect();
    match positive[..] {
        [] => Ok(ConePoint::Origin),
        [(s, l)] => Ok(ConePoint::OnRay { ray: ray_of(s), radius: l }),
        [(a, la), (b, lb)] => {
            let (ra, rb) = (ray_of(a), ray_of(b));
            let cone = t5
                .cones
                .iter()
                .position(|c| c.rays == [ra, rb] || c.rays == [rb, ra])
                .expect("compatible splits span a quadrant");
            let (x, y) = if t5.cones[cone].rays[0] == ra { (la, lb) } else { (lb, la) };
            Ok(ConePoint::InQuadrant { cone, x, y })
        }
        _ => unreachable!(),
    }
}

pub fn bhv_distance(t5: &SingleVertexComplex, t1: &Tree5, t2: &Tree5) -> Result<f64> {
    let a = tree_to_point(t5, t1)?;
    let b = tree_to_point(t5, t2)?;
    Ok(geodesic(t5, &a, &b)?.length)
}

/// Unweighted girth of a simple graph.
pub fn girth(g: &LinkGraph) -> Option<usize> {
    let n = g.nodes.len();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &g.incident[u] {
                let w = g.other_end(a, u);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = a;
                    q.push_back(w);
                } else if via[u] != a {
                    let c = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(c, |b: usize| b.min(c)));
                }
            }
        }
    }
    best
}

/// Certificate that a connected graph cannot be planar: with girth `g`, a planar
/// graph has at most `g/(g−2)·(V−2)` edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonPlanarity {
    pub girth: usize,
    pub edges: usize,
    pub planar_bound: f64,
}

pub fn nonplanarity_witness(g: &LinkGraph) -> Option<NonPlanarity> {
    let gi = girth(g)?;
    let v = g.nodes.len() as f64;
    let bound = gi as f64 / (gi as f64 - 2.0) * (v - 2.0);
    let e = g.arcs.len();
    (e as f64 > bound).then_some(NonPlanarity { girth: gi, edges: e, planar_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_round_trip_and_canonical_side() {
        let s: Split = "34|125".parse().unwrap();
        assert_eq!(s.to_string(), "125|34");
        assert_eq!(Split::all().len(), 10);
        assert!("12|34".parse::<Split>().is_err());
        assert!("1|2345".parse::<Split>().is_err());
    }

    #[test]
    fn fifteen_compatible_pairs() {
        let all = Split::all();
        let mut n = 0;
        for i in 0..10 {
            for j in i + 1..10 {
                n += splits_compatible(all[i], all[j]).unwrap() as usize;
            }
        }
        assert_eq!(n, 15);
        let a: Split = "12|345".parse().unwrap();
        let b: Split = "45|123".parse().unwrap();
        assert!(splits_compatible(a, b).unwrap());
        assert!(splits_compatible(a, a).is_err());
    }

    #[test]
    fn unit_tree_sits_on_diagonal() {
        let t5 = build_t5();
        let t = Tree5 { splits: vec![("12|345".parse().unwrap(), 1.0), ("45|123".parse().unwrap(), 1.0)] };
        let p = tree_to_point(&t5, &t).unwrap();
        assert!((p.radius() - 2f64.sqrt()).abs() < 1e-15);
        let Some(crate::complex_core::LinkPoint::Arc { offset, .. }) = p.direction(&t5) else { panic!() };
        assert!((offset - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn incompatible_pair_rejected() {
        let t5 = build_t5();
        let t = Tree5 { splits: vec![("12|345".parse().unwrap(), 1.0), ("13|245".parse().unwrap(), 1.0)] };
        assert!(matches!(tree_to_point(&t5, &t), Err(Error::IncompatibleSplits(..))));
    }
}
