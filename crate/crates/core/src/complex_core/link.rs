//! Weighted link multigraphs and truncated shortest-path searches on them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

/// Distances closer than this are treated as ties during path recovery.
pub const TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkArc {
    /// Face (or cone) index in the ambient complex.
    pub key: usize,
    /// Node indices; offsets along the arc are measured from `ends[0]`.
    pub ends: [usize; 2],
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkGraph {
    /// Anchor vertex for complex links; `None` for standalone graphs.
    pub anchor: Option<usize>,
    /// Node labels: edge (or ray) indices in the ambient complex.
    pub nodes: Vec<usize>,
    pub arcs: Vec<LinkArc>,
    /// Arcs incident to each node.
    pub incident: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LinkPoint {
    Node(usize),
    Arc { arc: usize, offset: f64 },
}

/// One traversal of (part of) an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hop {
    pub arc: usize,
    pub from: LinkPoint,
    pub to: LinkPoint,
    pub len: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkPath {
    pub start: LinkPoint,
    pub end: LinkPoint,
    pub length: f64,
    pub hops: Vec<Hop>,
}

impl LinkPath {
    /// Interior nodes with their distance from the start.
    pub fn interior_nodes(&self) -> Vec<(usize, f64)> {
        let mut acc = 0.0;
        let mut out = Vec::new();
        for (i, h) in self.hops.iter().enumerate() {
            acc += h.len;
            if i + 1 < self.hops.len() {
                if let LinkPoint::Node(n) = h.to {
                    out.push((n, acc));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkCycle {
    pub length: f64,
    pub arcs: Vec<usize>,
}

/// Result of a truncated search: distances and all tied predecessors.
#[derive(Debug, Clone)]
pub struct Search {
    pub dist: Vec<f64>,
    /// `(previous node, arc)` pairs realizing `dist` within [`TIE`].
    pub pred: Vec<Vec<(usize, usize)>>,
    /// Initial distance of each seed node.
    pub seed: Vec<Option<f64>>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl LinkGraph {
    pub fn new(anchor: Option<usize>, nodes: Vec<usize>, arcs: Vec<LinkArc>) -> Self {
        let mut incident = vec![Vec::new(); nodes.len()];
        for (i, a) in arcs.iter().enumerate() {
            incident[a.ends[0]].push(i);
            if a.ends[1] != a.ends[0] {
                incident[a.ends[1]].push(i);
            }
        }
        Self { anchor, nodes, arcs, incident }
    }

    pub fn degree(&self, n: usize) -> usize {
        self.incident[n].len()
    }

    pub fn other_end(&self, arc: usize, n: usize) -> usize {
        let e = self.arcs[arc].ends;
        if e[0] == n {
            e[1]
        } else {
            e[0]
        }
    }

    /// Offset of node `n` along `arc` (0 or the weight).
    pub fn node_offset(&self, arc: usize, n: usize) -> f64 {
        if self.arcs[arc].ends[0] == n {
            0.0
        } else {
            self.arcs[arc].weight
        }
    }

    /// Replace arc points at an endpoint by the node itself.
    pub fn normalize(&self, p: LinkPoint) -> LinkPoint {
        match p {
            LinkPoint::Arc { arc, offset } => {
                let a = &self.arcs[arc];
                if offset <= 0.0 {
                    LinkPoint::Node(a.ends[0])
                } else if offset >= a.weight {
                    LinkPoint::Node(a.ends[1])
                } else {
                    p
                }
            }
            n => n,
        }
    }

    /// Initial node distances for a search started at `p`.
    pub fn seeds(&self, p: LinkPoint) -> Vec<(usize, f64)> {
        match self.normalize(p) {
            LinkPoint::Node(n) => vec![(n, 0.0)],
            LinkPoint::Arc { arc, offset } => {
                let a = &self.arcs[arc];
                vec![(a.ends[0], offset), (a.ends[1], a.weight - offset)]
            }
        }
    }

    /// Dijkstra from `seeds`, never settling beyond `radius`, optionally ignoring one arc.
    pub fn search(&self, seeds: &[(usize, f64)], radius: f64, skip_arc: Option<usize>) -> Search {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut seed = vec![None; n];
        let mut heap = BinaryHeap::new();
        for &(s, d) in seeds {
            if d <= radius && d < dist[s] {
                dist[s] = d;
                seed[s] = Some(d);
                heap.push(Item(d, s));
            }
        }
        let mut done = vec![false; n];
        while let Some(Item(d, u)) = heap.pop() {
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            for &ai in &self.incident[u] {
                if Some(ai) == skip_arc {
                    continue;
                }
                let w = self.other_end(ai, u);
                let nd = d + self.arcs[ai].weight;
                if nd > radius {
                    continue;
                }
                if nd < dist[w] - TIE {
                    dist[w] = nd;
                    pred[w] = vec![(u, ai)];
                    if seed[w].is_some_and(|s| s > nd + TIE) {
                        seed[w] = None;
                    }
                    heap.push(Item(nd, w));
                } else if (nd - dist[w]).abs() <= TIE && !pred[w].contains(&(u, ai)) {
                    pred[w].push((u, ai));
                }
            }
        }
        Search { dist, pred, seed }
    }

    /// Graph distance between two link points, or `None` beyond `radius`.
    pub fn distance(&self, a: LinkPoint, b: LinkPoint, radius: f64) -> Option<f64> {
        self.shortest_paths(a, b, radius, 1).first().map(|p| p.length)
    }

    /// All shortest paths from `a` to `b` (ties within [`TIE`]), at most `cap` of them.
    pub fn shortest_paths(&self, a: LinkPoint, b: LinkPoint, radius: f64, cap: usize) -> Vec<LinkPath> {
        let a = self.normalize(a);
        let b = self.normalize(b);
        if a == b {
            return vec![LinkPath { start: a, end: b, length: 0.0, hops: Vec::new() }];
        }
        let s = self.search(&self.seeds(a), radius, None);
        // Ways to finish: (total length, last node or None for a direct hop, final hop).
        let mut finals: Vec<(f64, Option<usize>, Option<Hop>)> = Vec::new();
        if let (LinkPoint::Arc { arc: x, offset: oa }, LinkPoint::Arc { arc: y, offset: ob }) = (a, b) {
            if x == y {
                let len = (oa - ob).abs();
                finals.push((len, None, Some(Hop { arc: x, from: a, to: b, len })));
            }
        }
        match b {
            LinkPoint::Node(m) => {
                if s.dist[m].is_finite() {
                    finals.push((s.dist[m], Some(m), None));
                }
            }
            LinkPoint::Arc { arc, offset } => {
                let ar = &self.arcs[arc];
                for (k, &m) in ar.ends.iter().enumerate() {
                    let part = if k == 0 { offset } else { ar.weight - offset };
                    if s.dist[m].is_finite() {
                        let hop = Hop { arc, from: LinkPoint::Node(m), to: b, len: part };
                        finals.push((s.dist[m] + part, Some(m), Some(hop)));
                    }
                }
            }
        }
        let Some(best) = finals.iter().map(|f| f.0).min_by(f64::total_cmp) else {
            return Vec::new();
        };
        if best > radius {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (len, last, hop) in finals {
            if len > best + TIE || out.len() >= cap {
                continue;
            }
            match last {
                None => out.push(LinkPath { start: a, end: b, length: len, hops: vec![hop.unwrap()] }),
                Some(m) => {
                    let mut prefixes = Vec::new();
                    self.unwind(&s, a, m, &mut Vec::new(), &mut prefixes, cap);
                    for mut hops in prefixes {
                        if let Some(h) = hop {
                            hops.push(h);
                        }
                        if out.len() < cap {
                            out.push(LinkPath { start: a, end: b, length: len, hops });
                        }
                    }
                }
            }
        }
        out
    }

    /// Enumerate hop sequences from start point `a` to node `m` along tied predecessors.
    fn unwind(&self, s: &Search, a: LinkPoint, m: usize, suffix: &mut Vec<Hop>, out: &mut Vec<Vec<Hop>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if let Some(sd) = s.seed[m] {
            if (sd - s.dist[m]).abs() <= TIE {
                let mut hops = Vec::new();
                if let LinkPoint::Arc { arc, .. } = a {
                    hops.push(Hop { arc, from: a, to: LinkPoint::Node(m), len: sd });
                }
                hops.extend(suffix.iter().rev().copied());
                out.push(hops);
            }
        }
        for &(u, arc) in &s.pred[m] {
            suffix.push(Hop {
                arc,
                from: LinkPoint::Node(u),
                to: LinkPoint::Node(m),
                len: self.arcs[arc].weight,
            });
            self.unwind(s, a, u, suffix, out, cap);
            suffix.pop();
        }
    }

    /// Minimum-weight cycle: for each arc, the arc plus a shortest path between its
    /// endpoints avoiding it.
    pub fn shortest_cycle(&self) -> Option<LinkCycle> {
        let mut best: Option<LinkCycle> = None;
        for (i, a) in self.arcs.iter().enumerate() {
            let [u, w] = a.ends;
            let (len, others) = if u == w {
                (a.weight, Vec::new())
            } else {
                let s = self.search(&[(u, 0.0)], f64::INFINITY, Some(i));
                if !s.dist[w].is_finite() {
                    continue;
                }
                let mut arcs = Vec::new();
                let mut cur = w;
                while cur != u {
                    let (p, arc) = s.pred[cur][0];
                    arcs.push(arc);
                    cur = p;
                }
                arcs.reverse();
                (a.weight + s.dist[w], arcs)
            };
            if best.as_ref().is_none_or(|b| len < b.length - TIE) {
                let mut arcs = others;
                arcs.push(i);
                best = Some(LinkCycle { length: len, arcs });
            }
        }
        best
    }

    /// Connected components of the node set.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let mut c = 0;
        for s in 0..self.nodes.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(u) = stack.pop() {
                for &ai in &self.incident[u] {
                    let w = self.other_end(ai, u);
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cycle(k: usize, w: f64) -> LinkGraph {
        let arcs = (0..k).map(|i| LinkArc { key: i, ends: [i, (i + 1) % k], weight: w }).collect();
        LinkGraph::new(None, (0..k).collect(), arcs)
    }

    #[test]
    fn triangle_cycle_length() {
        let c = cycle(3, PI / 2.0).shortest_cycle().unwrap();
        assert!((c.length - 1.5 * PI).abs() < 1e-12);
        assert_eq!(c.arcs.len(), 3);
    }

    #[test]
    fn single_arc_has_no_cycle() {
        let g = LinkGraph::new(None, vec![0, 1], vec![LinkArc { key: 0, ends: [0, 1], weight: 1.0 }]);
        assert!(g.shortest_cycle().is_none());
    }

    #[test]
    fn antipodal_points_have_two_tied_paths() {
        let g = cycle(4, PI / 2.0);
        let a = LinkPoint::Arc { arc: 0, offset: 0.25 };
        let b = LinkPoint::Arc { arc: 2, offset: 0.25 };
        let paths = g.shortest_paths(a, b, 10.0, 8);
        assert_eq!(paths.len(), 2);
        for p in &paths {
            assert!((p.length - PI).abs() < 1e-12);
            let total: f64 = p.hops.iter().map(|h| h.len).sum();
            assert!((total - p.length).abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_search_stops_at_radius() {
        let g = cycle(8, 0.5);
        assert!(g.distance(LinkPoint::Node(0), LinkPoint::Node(4), 1.5).is_none());
        assert!((g.distance(LinkPoint::Node(0), LinkPoint::Node(3), 1.5).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn same_arc_direct_distance() {
        let g = cycle(3, 1.0);
        let d = g.distance(LinkPoint::Arc { arc: 1, offset: 0.2 }, LinkPoint::Arc { arc: 1, offset: 0.9 }, 5.0);
        assert!((d.unwrap() - 0.7).abs() < 1e-12);
    }
}
