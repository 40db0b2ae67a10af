//! Weighted graph representation and shortest-path primitives.
//!
//! Edge weights are stored as positive integer *ticks*; a graph-wide `unit`
//! converts ticks to real lengths. Sums of weights are therefore exact, and
//! only comparisons against real-valued thresholds go through `f64`.

mod apsp;
mod io;
mod random;
pub(crate) mod search;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use apsp::{all_pairs, exact_diameter, DistanceMatrix};
pub use random::{random_connected, random_gnp};
pub use search::{
    ball, ball_edges, eccentricity, hop_limited_distance, hop_limited_from, multi_source_sssp,
    shortest_path, sssp, sssp_tree, DistMap, ShortestPathTree,
};

/// Relative slack used when a exact tick distance is compared against a
/// real-valued threshold.
pub const THRESHOLD_TOL: f64 = 1e-9;

/// `a <= b`, allowing `THRESHOLD_TOL` relative slack.
pub fn le_tol(a: f64, b: f64) -> bool {
    a <= b + THRESHOLD_TOL * b.abs().max(1.0)
}

/// `a > b` by more than the comparison slack.
pub fn gt_tol(a: f64, b: f64) -> bool {
    a > b + THRESHOLD_TOL * b.abs().max(1.0)
}

/// A shortest-path length in ticks, or the dedicated unreachable sentinel.
///
/// `Finite` orders below `Unreachable`, and addition saturates to
/// `Unreachable`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(u64),
    Unreachable,
}

impl Distance {
    pub const ZERO: Distance = Distance::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn ticks(self) -> Option<u64> {
        match self {
            Distance::Finite(t) => Some(t),
            Distance::Unreachable => None,
        }
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => match a.checked_add(b) {
                Some(s) => Distance::Finite(s),
                None => Distance::Unreachable,
            },
            _ => Distance::Unreachable,
        }
    }
}

impl Add<u64> for Distance {
    type Output = Distance;

    fn add(self, rhs: u64) -> Distance {
        self + Distance::Finite(rhs)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(t) => write!(f, "{t}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Distances from the source.
    Out,
    /// Distances to the target.
    In,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Weight in ticks, always positive.
    pub w: u64,
}

/// One adjacency entry.
#[derive(Clone, Copy, Debug)]
pub struct Arc {
    pub to: usize,
    pub w: u64,
    pub edge: usize,
}

#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<usize>,
    arcs: Vec<Arc>,
}

impl Csr {
    fn build(n: usize, arcs: impl Iterator<Item = (usize, Arc)> + Clone) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for (from, _) in arcs.clone() {
            offsets[from + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut out = vec![
            Arc {
                to: 0,
                w: 0,
                edge: 0
            };
            offsets[n]
        ];
        for (from, arc) in arcs {
            out[fill[from]] = arc;
            fill[from] += 1;
        }
        for v in 0..n {
            out[offsets[v]..offsets[v + 1]].sort_by(|a, b| a.to.cmp(&b.to).then(a.w.cmp(&b.w)));
        }
        Csr { offsets, arcs: out }
    }

    fn row(&self, v: usize) -> &[Arc] {
        &self.arcs[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// A directed or undirected graph with positive edge weights.
///
/// Undirected edges are stored once and traversed in both directions.
#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    n: usize,
    edges: Vec<Edge>,
    unit: f64,
    decimals: Option<u32>,
    out_adj: Csr,
    in_adj: Option<Csr>,
    w_min: u64,
    w_max: u64,
}

impl Graph {
    /// Builds a graph whose tick weights are also its real weights.
    pub fn new(
        directed: bool,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Graph> {
        let edges = edges
            .into_iter()
            .map(|(u, v, w)| Edge { u, v, w })
            .collect();
        Graph::from_parts(directed, n, edges, 1.0, Some(0))
    }

    /// Unit-weight graph.
    pub fn unweighted(
        directed: bool,
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph> {
        Graph::new(directed, n, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub(crate) fn from_parts(
        directed: bool,
        n: usize,
        edges: Vec<Edge>,
        unit: f64,
        decimals: Option<u32>,
    ) -> Result<Graph> {
        if !(unit.is_finite() && unit > 0.0) {
            return Err(Error::param(format!("unit must be positive, got {unit}")));
        }
        let mut w_min = u64::MAX;
        let mut w_max = 0;
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if e.w == 0 {
                return Err(Error::param(format!(
                    "edge ({}, {}) has non-positive weight",
                    e.u, e.v
                )));
            }
            w_min = w_min.min(e.w);
            w_max = w_max.max(e.w);
        }
        if edges.is_empty() {
            w_min = 1;
            w_max = 1;
        }
        let (out_adj, in_adj) = if directed {
            let fwd = edges.iter().enumerate().map(|(i, e)| {
                (
                    e.u,
                    Arc {
                        to: e.v,
                        w: e.w,
                        edge: i,
                    },
                )
            });
            let bwd = edges.iter().enumerate().map(|(i, e)| {
                (
                    e.v,
                    Arc {
                        to: e.u,
                        w: e.w,
                        edge: i,
                    },
                )
            });
            (Csr::build(n, fwd), Some(Csr::build(n, bwd)))
        } else {
            let both = edges.iter().enumerate().flat_map(|(i, e)| {
                let a = (
                    e.u,
                    Arc {
                        to: e.v,
                        w: e.w,
                        edge: i,
                    },
                );
                let b = (
                    e.v,
                    Arc {
                        to: e.u,
                        w: e.w,
                        edge: i,
                    },
                );
                // a self-loop appears once
                let second = if e.u == e.v { None } else { Some(b) };
                std::iter::once(a).chain(second)
            });
            (Csr::build(n, both), None)
        };
        Ok(Graph {
            directed,
            n,
            edges,
            unit,
            decimals,
            out_adj,
            in_adj,
            w_min,
            w_max,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Real length of one tick.
    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn w_min_ticks(&self) -> u64 {
        self.w_min
    }

    pub fn w_max_ticks(&self) -> u64 {
        self.w_max
    }

    pub fn w_min(&self) -> f64 {
        self.w_min as f64 * self.unit
    }

    pub fn w_max(&self) -> f64 {
        self.w_max as f64 * self.unit
    }

    /// True when every edge has the same weight, so BFS gives exact distances.
    pub fn is_uniform(&self) -> bool {
        self.w_min == self.w_max
    }

    pub fn to_units(&self, ticks: u64) -> f64 {
        ticks as f64 * self.unit
    }

    pub fn distance_units(&self, d: Distance) -> Option<f64> {
        d.ticks().map(|t| self.to_units(t))
    }

    /// Converts a real weight to ticks when it is (numerically) a whole
    /// number of ticks.
    pub fn ticks_for(&self, w: f64) -> Option<u64> {
        if !(w.is_finite() && w > 0.0) {
            return None;
        }
        let t = w / self.unit;
        let r = t.round();
        if r < 1.0 || r > u64::MAX as f64 / 2.0 {
            return None;
        }
        if (t - r).abs() <= 1e-6 * r.max(1.0) {
            Some(r as u64)
        } else {
            None
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Adjacency of `v` in traversal direction `dir`: successors for `Out`,
    /// predecessors for `In`. Undirected graphs ignore `dir`.
    pub fn arcs(&self, v: usize, dir: Direction) -> &[Arc] {
        match (dir, &self.in_adj) {
            (Direction::In, Some(rev)) => rev.row(v),
            _ => self.out_adj.row(v),
        }
    }

    /// Minimum weight of an edge usable from `u` to `v`, if any.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u64> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let row = self.out_adj.row(u);
        let i = row.partition_point(|a| a.to < v);
        // rows are sorted by (to, w), so the first hit is the lightest
        row.get(i).filter(|a| a.to == v).map(|a| a.w)
    }

    /// Same vertex set and unit, with extra edges appended.
    pub fn with_extra_edges(
        &self,
        extra: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.extend(extra.into_iter().map(|(u, v, w)| Edge { u, v, w }));
        Graph::from_parts(self.directed, self.n, edges, self.unit, self.decimals)
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Graph> {
        let mut g = self.clone();
        g.unit = self.unit * factor;
        if !(g.unit.is_finite() && g.unit > 0.0) {
            return Err(Error::param(format!("invalid rescale factor {factor}")));
        }
        g.decimals = None;
        Ok(g)
    }

    /// Rescaled so that the minimum edge weight is exactly 1.
    pub fn normalized_min_weight(&self) -> Graph {
        let mut g = self.clone();
        g.unit = 1.0 / self.w_min as f64;
        g.decimals = None;
        g
    }

    /// Renders a tick count the way the text format prints weights.
    pub(crate) fn format_ticks(&self, ticks: u64) -> String {
        match self.decimals {
            Some(0) if self.unit == 1.0 => ticks.to_string(),
            Some(p) if p > 0 => {
                let scale = 10u64.pow(p);
                let frac = ticks % scale;
                let whole = ticks / scale;
                let s = format!("{whole}.{frac:0width$}", width = p as usize);
                s.trim_end_matches('0').trim_end_matches('.').to_string()
            }
            _ => format!("{}", self.to_units(ticks)),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.n == other.n
            && self.edges == other.edges
            && self.unit.partial_cmp(&other.unit) == Some(Ordering::Equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_arithmetic_propagates_sentinel() {
        assert_eq!(
            Distance::Finite(2) + Distance::Finite(3),
            Distance::Finite(5)
        );
        assert_eq!(
            Distance::Finite(2) + Distance::Unreachable,
            Distance::Unreachable
        );
        assert_eq!(Distance::Unreachable + 1u64, Distance::Unreachable);
        assert!(Distance::Finite(u64::MAX) < Distance::Unreachable);
        assert_eq!(Distance::Finite(u64::MAX) + 1u64, Distance::Unreachable);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::new(true, 2, [(0, 2, 1)]),
            Err(Error::InvalidVertex { vertex: 2, n: 2 })
        ));
        assert!(Graph::new(true, 2, [(0, 1, 0)]).is_err());
    }

    #[test]
    fn caches_weight_range() {
        let g = Graph::new(false, 3, [(0, 1, 4), (1, 2, 9)]).unwrap();
        assert_eq!(g.w_min_ticks(), 4);
        assert_eq!(g.w_max_ticks(), 9);
        assert!(!g.is_uniform());
        let n = g.normalized_min_weight();
        assert_eq!(n.w_min(), 1.0);
        assert_eq!(n.w_max(), 2.25);
    }

    #[test]
    fn edge_weight_takes_lightest_parallel_edge() {
        let g = Graph::new(true, 2, [(0, 1, 5), (0, 1, 2)]).unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(2));
        assert_eq!(g.edge_weight(1, 0), None);
        let u = Graph::new(false, 2, [(0, 1, 5)]).unwrap();
        assert_eq!(u.edge_weight(1, 0), Some(5));
    }

    #[test]
    fn ticks_round_trip() {
        let g = Graph::new(true, 2, [(0, 1, 3)])
            .unwrap()
            .rescaled(0.1)
            .unwrap();
        assert_eq!(g.ticks_for(0.3), Some(3));
        assert_eq!(g.ticks_for(0.35), None);
        assert_eq!(g.ticks_for(-1.0), None);
    }
}
