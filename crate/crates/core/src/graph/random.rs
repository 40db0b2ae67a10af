//! Seeded random graph families used by experiments and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::rng;

fn weight(r: &mut impl Rng, max_weight: u64) -> u64 {
    r.gen_range(1..=max_weight)
}

fn check(n: usize, max_weight: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::param("graph needs at least one vertex"));
    }
    if max_weight == 0 {
        return Err(Error::param("maximum weight must be positive"));
    }
    Ok(())
}

/// A connected graph (strongly connected if `directed`) with `n` vertices,
/// a random spanning backbone and `extra` additional random edges. Weights
/// are uniform in `1..=max_weight`.
///
/// The backbone is a random spanning tree for undirected graphs and a random
/// Hamiltonian cycle for directed graphs.
pub fn random_connected(
    directed: bool,
    n: usize,
    extra: usize,
    max_weight: u64,
    seed: u64,
) -> Result<Graph> {
    check(n, max_weight)?;
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut edges = Vec::with_capacity(n + extra);
    if directed {
        if n > 1 {
            for i in 0..n {
                edges.push((order[i], order[(i + 1) % n], weight(&mut r, max_weight)));
            }
        }
    } else {
        for i in 1..n {
            let j = r.gen_range(0..i);
            edges.push((order[j], order[i], weight(&mut r, max_weight)));
        }
    }
    if n > 1 {
        for _ in 0..extra {
            let u = r.gen_range(0..n);
            let v = (u + r.gen_range(1..n)) % n;
            edges.push((u, v, weight(&mut r, max_weight)));
        }
    }
    Graph::new(directed, n, edges)
}

/// Each possible edge present independently with probability `p`.
pub fn random_gnp(directed: bool, n: usize, p: f64, max_weight: u64, seed: u64) -> Result<Graph> {
    check(n, max_weight)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        let first = if directed { 0 } else { u + 1 };
        for v in first..n {
            if u != v && r.gen_bool(p) {
                edges.push((u, v, weight(&mut r, max_weight)));
            }
        }
    }
    Graph::new(directed, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::exact_diameter;

    #[test]
    fn backbones_connect() {
        for seed in 0..20 {
            for directed in [false, true] {
                let g = random_connected(directed, 30, 10, 5, seed).unwrap();
                assert!(exact_diameter(&g).is_finite());
                let expected = if directed { 40 } else { 39 };
                assert_eq!(g.edge_count(), expected);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_gnp(true, 20, 0.3, 4, 9).unwrap();
        let b = random_gnp(true, 20, 0.3, 4, 9).unwrap();
        assert_eq!(a, b);
        assert!(random_gnp(false, 5, 1.5, 1, 0).is_err());
    }

    #[test]
    fn single_vertex() {
        let g = random_connected(true, 1, 5, 1, 0).unwrap();
        assert_eq!(g.edge_count(), 0);
    }
}
