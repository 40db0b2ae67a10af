//! Additive hopsets: sampled truncated-Dijkstra shortcuts for undirected
//! graphs, an all-pairs fallback for directed ones, and exact verifiers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::search::HopTable;
use crate::graph::{
    all_pairs, exact_diameter, le_tol, multi_source_sssp, Direction, Distance, Graph,
};
use crate::reductions::DEFAULT_SIZE_BUDGET;
use crate::rng::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shortcut {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hopset {
    pub shortcuts: Vec<Shortcut>,
    pub claimed_beta: usize,
    pub claimed_epsilon: f64,
}

impl Hopset {
    pub fn len(&self) -> usize {
        self.shortcuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shortcuts.is_empty()
    }

    /// Shortcuts as tick-weighted edges of `g`, or `None` if an endpoint is
    /// out of range or a weight is not a whole number of ticks.
    pub fn tick_edges(&self, g: &Graph) -> Option<Vec<(usize, usize, u64)>> {
        self.shortcuts
            .iter()
            .map(|s| {
                if s.u >= g.vertex_count() || s.v >= g.vertex_count() {
                    return None;
                }
                Some((s.u, s.v, g.ticks_for(s.w)?))
            })
            .collect()
    }

    /// `g` with the shortcuts added, when they are representable.
    pub fn augment(&self, g: &Graph) -> Option<Graph> {
        g.with_extra_edges(self.tick_edges(g)?).ok()
    }

    /// File format: `hopset <count> <beta> <epsilon>` then `<u> <v> <w>` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "hopset {} {} {}\n",
            self.len(),
            self.claimed_beta,
            self.claimed_epsilon
        );
        for sc in &self.shortcuts {
            let _ = writeln!(s, "{} {} {}", sc.u, sc.v, sc.w);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Hopset> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "hopset" {
            return Err(Error::parse(
                hline,
                "header must be `hopset <count> <beta> <epsilon>`",
            ));
        }
        let count: usize = parts[1]
            .parse()
            .map_err(|_| Error::parse(hline, "invalid count"))?;
        let claimed_beta: usize = parts[2]
            .parse()
            .map_err(|_| Error::parse(hline, "invalid beta"))?;
        let claimed_epsilon: f64 = parts[3]
            .parse()
            .map_err(|_| Error::parse(hline, "invalid epsilon"))?;
        let mut shortcuts = Vec::with_capacity(count);
        for (lineno, l) in lines.by_ref().take(count) {
            let toks: Vec<&str> = l.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                [u, v, w] => u
                    .parse()
                    .ok()
                    .zip(v.parse().ok())
                    .zip(w.parse::<f64>().ok()),
                _ => None,
            };
            let ((u, v), w) = parsed
                .ok_or_else(|| Error::parse(lineno, "shortcut line must be `<u> <v> <w>`"))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::parse(lineno, "shortcut weight must be positive"));
            }
            shortcuts.push(Shortcut { u, v, w });
        }
        if shortcuts.len() != count {
            return Err(Error::parse(
                hline,
                format!(
                    "header declares {count} shortcuts, found {}",
                    shortcuts.len()
                ),
            ));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing content after last shortcut"));
        }
        Ok(Hopset {
            shortcuts,
            claimed_beta,
            claimed_epsilon,
        })
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Hopset> {
        Hopset::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopsetParams {
    pub delta: f64,
    pub epsilon: f64,
    /// Multiplier in front of the per-level sample count `m^{i/k} ln m`.
    pub sample_factor: f64,
}

impl HopsetParams {
    pub fn new(delta: f64, epsilon: f64) -> Result<HopsetParams> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!(
                "delta must be in (0, 1), got {delta}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param(format!(
                "epsilon must be in (0, 1), got {epsilon}"
            )));
        }
        Ok(HopsetParams {
            delta,
            epsilon,
            sample_factor: 4.0,
        })
    }

    pub fn with_sample_factor(mut self, factor: f64) -> HopsetParams {
        self.sample_factor = factor;
        self
    }

    pub fn levels(&self) -> usize {
        ((1.0 / self.delta) - 1e-12).ceil().max(1.0) as usize
    }

    /// Truncation budget `M_i = m^{(k+1-i)/k}`, rounded up.
    pub fn truncation(&self, i: usize, m: usize) -> usize {
        let k = self.levels() as f64;
        ((m as f64).powf((k + 1.0 - i as f64) / k).ceil() as usize).max(1)
    }

    /// Number of edges sampled for level `i`, capped at `m`.
    pub fn sample_count(&self, i: usize, m: usize) -> usize {
        let k = self.levels() as f64;
        let ln_m = (m.max(2) as f64).ln();
        let raw = self.sample_factor * (m as f64).powf(i as f64 / k) * ln_m;
        (raw.ceil() as usize).min(m)
    }

    pub fn epsilon_prime(&self) -> f64 {
        self.epsilon / 6.0
    }

    /// Hop bound `(k+1) * 2 * eps'^{-k}` with `eps' = eps / 6`.
    pub fn claimed_beta(&self) -> usize {
        let k = self.levels();
        let v = (k as f64 + 1.0) * 2.0 * self.epsilon_prime().powi(-(k as i32));
        // absorb rounding noise in the power before rounding up
        (v * (1.0 - 1e-12)).ceil() as usize
    }
}

/// Dijkstra from `v` that stops once `2M` adjacency entries of settled
/// vertices have been scanned. Returns the settled vertices with their exact
/// distances, in settling order.
pub fn truncated_dijkstra(g: &Graph, v: usize, budget: usize) -> Result<Vec<(usize, Distance)>> {
    g.check_vertex(v)?;
    if budget == 0 {
        return Err(Error::param("truncation budget must be positive"));
    }
    let limit = budget.saturating_mul(2);
    let n = g.vertex_count();
    let mut best = vec![u64::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    let mut scanned = 0usize;
    best[v] = 0;
    heap.push(Reverse((0u64, v)));
    'outer: while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        settled.push((u, Distance::Finite(d)));
        for a in g.arcs(u, Direction::Out) {
            if scanned >= limit {
                break 'outer;
            }
            scanned += 1;
            let nd = d.saturating_add(a.w);
            if nd < best[a.to] {
                best[a.to] = nd;
                heap.push(Reverse((nd, a.to)));
            }
        }
    }
    Ok(settled)
}

pub fn build_undirected_hopset(g: &Graph, delta: f64, epsilon: f64, seed: u64) -> Result<Hopset> {
    build_undirected_hopset_with(g, &HopsetParams::new(delta, epsilon)?, seed)
}

pub fn build_undirected_hopset_with(g: &Graph, params: &HopsetParams, seed: u64) -> Result<Hopset> {
    if g.is_directed() {
        return Err(Error::param(
            "sampled hopset construction needs an undirected graph",
        ));
    }
    let m = g.edge_count();
    let k = params.levels();
    let mut r = rng(seed);
    let mut found: Vec<(usize, usize, u64)> = Vec::new();
    for i in 1..=k {
        let count = params.sample_count(i, m);
        let mut hit = vec![false; g.vertex_count()];
        let mut mark = |e: usize| {
            let edge = g.edges()[e];
            hit[edge.u] = true;
            hit[edge.v] = true;
        };
        if count >= m {
            (0..m).for_each(&mut mark);
        } else {
            for _ in 0..count {
                mark(r.gen_range(0..m));
            }
        }
        let budget = params.truncation(i, m);
        for v in (0..g.vertex_count()).filter(|&v| hit[v]) {
            for (u, d) in truncated_dijkstra(g, v, budget)? {
                if u != v {
                    let t = d.ticks().expect("settled vertices are reachable");
                    found.push((v.min(u), v.max(u), t));
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup_by_key(|&mut (u, v, _)| (u, v));
    Ok(Hopset {
        shortcuts: found
            .into_iter()
            .map(|(u, v, t)| Shortcut {
                u,
                v,
                w: g.to_units(t),
            })
            .collect(),
        claimed_beta: params.claimed_beta(),
        claimed_epsilon: params.epsilon,
    })
}

/// Every reachable pair joined by a shortcut of its exact distance; a
/// `(1, 0)` hopset. Undirected graphs get one shortcut per unordered pair.
pub fn exhaustive_hopset(g: &Graph) -> Result<Hopset> {
    exhaustive_hopset_within(g, DEFAULT_SIZE_BUDGET)
}

pub fn exhaustive_hopset_within(g: &Graph, budget: u64) -> Result<Hopset> {
    let n = g.vertex_count() as u64;
    let estimated = n.saturating_mul(n);
    if estimated > budget {
        return Err(Error::SizeBudget { estimated, budget });
    }
    let apsp = all_pairs(g);
    let mut shortcuts = Vec::new();
    for u in 0..g.vertex_count() {
        for v in 0..g.vertex_count() {
            if u == v || (!g.is_directed() && v < u) {
                continue;
            }
            if let Distance::Finite(t) = apsp.get(u, v) {
                shortcuts.push(Shortcut {
                    u,
                    v,
                    w: g.to_units(t),
                });
            }
        }
    }
    Ok(Hopset {
        shortcuts,
        claimed_beta: 1,
        claimed_epsilon: 0.0,
    })
}

/// Compares all-pairs distances of `g` and `g` plus the shortcuts.
pub fn verify_distance_preservation(g: &Graph, h: &Hopset) -> bool {
    match h.augment(g) {
        Some(aug) => all_pairs(g) == all_pairs(&aug),
        None => false,
    }
}

/// Pairs an additive hop bound is checked on.
#[derive(Clone, Copy, Debug)]
pub enum PairSelection<'a> {
    All,
    List(&'a [(usize, usize)]),
}

/// True iff every selected pair has a path of at most `beta` edges in
/// `g + h` of length at most `d_G(u, v) + epsilon * diam(G)`.
pub fn verify_additive_hopbound(
    g: &Graph,
    h: &Hopset,
    beta: usize,
    epsilon: f64,
    pairs: PairSelection<'_>,
) -> bool {
    if beta == 0 || epsilon.is_nan() || epsilon < 0.0 {
        return false;
    }
    let Some(diam) = g.distance_units(exact_diameter(g)) else {
        return false;
    };
    let Some(aug) = h.augment(g) else {
        return false;
    };
    let n = g.vertex_count();
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); n];
    match pairs {
        PairSelection::All => targets.iter_mut().for_each(|t| *t = (0..n).collect()),
        PairSelection::List(list) => {
            for &(u, v) in list {
                if u >= n || v >= n {
                    return false;
                }
                targets[u].push(v);
            }
        }
    }
    (0..n).filter(|&u| !targets[u].is_empty()).all(|u| {
        let exact = multi_source_sssp(g, &[u], Direction::Out).expect("valid source");
        let hop = HopTable::build(&aug, u, beta, false);
        targets[u].iter().all(
            |&v| match (exact.units(v), aug.distance_units(hop.dist(v))) {
                (Some(d), Some(hd)) => le_tol(hd, d + epsilon * diam),
                _ => false,
            },
        )
    })
}

/// Source of hopsets for the certifier.
pub trait HopsetBuilder {
    fn build(&self, g: &Graph, seed: u64) -> Result<Hopset>;
}

/// Sampled construction for undirected graphs.
#[derive(Clone, Copy, Debug)]
pub struct SampledHopsets(pub HopsetParams);

impl HopsetBuilder for SampledHopsets {
    fn build(&self, g: &Graph, seed: u64) -> Result<Hopset> {
        build_undirected_hopset_with(g, &self.0, seed)
    }
}

/// All-pairs fallback, usable on directed graphs.
#[derive(Clone, Copy, Debug)]
pub struct ExhaustiveHopsets {
    pub budget: u64,
}

impl Default for ExhaustiveHopsets {
    fn default() -> Self {
        ExhaustiveHopsets {
            budget: DEFAULT_SIZE_BUDGET,
        }
    }
}

impl HopsetBuilder for ExhaustiveHopsets {
    fn build(&self, g: &Graph, _seed: u64) -> Result<Hopset> {
        exhaustive_hopset_within(g, self.budget)
    }
}
