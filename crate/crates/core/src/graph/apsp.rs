use rayon::prelude::*;

use super::search::distances;
use super::{Direction, Distance, Graph};

/// Dense all-pairs distance table, row = source.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn get(&self, u: usize, v: usize) -> Distance {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Distance] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn max(&self) -> Distance {
        self.d.iter().copied().max().unwrap_or(Distance::ZERO)
    }
}

pub fn all_pairs(g: &Graph) -> DistanceMatrix {
    let n = g.vertex_count();
    let rows: Vec<Vec<Distance>> = (0..n)
        .into_par_iter()
        .map(|s| distances(g, &[s], Direction::Out))
        .collect();
    DistanceMatrix {
        n,
        d: rows.concat(),
    }
}

/// Maximum distance over ordered pairs, `Unreachable` unless the graph is
/// (strongly) connected. The brute-force oracle every gap check relies on.
pub fn exact_diameter(g: &Graph) -> Distance {
    let n = g.vertex_count();
    if n == 0 {
        return Distance::ZERO;
    }
    if g.is_uniform() {
        let w = g.w_min_ticks();
        (0..n.div_ceil(64))
            .into_par_iter()
            .map(
                |c| match bitset_bfs_levels(g, c * 64, (c * 64 + 64).min(n)) {
                    Some(l) => Distance::Finite(l * w),
                    None => Distance::Unreachable,
                },
            )
            .max()
            .unwrap_or(Distance::ZERO)
    } else {
        (0..n)
            .into_par_iter()
            .map(|s| {
                distances(g, &[s], Direction::Out)
                    .into_iter()
                    .max()
                    .unwrap_or(Distance::ZERO)
            })
            .max()
            .unwrap_or(Distance::ZERO)
    }
}

/// Runs BFS from sources `lo..hi` simultaneously, one bit per source.
/// Returns the largest BFS depth reached, or `None` if some source misses
/// some vertex.
fn bitset_bfs_levels(g: &Graph, lo: usize, hi: usize) -> Option<u64> {
    let n = g.vertex_count();
    let width = hi - lo;
    let full: u64 = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let mut seen = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    for (bit, s) in (lo..hi).enumerate() {
        seen[s] |= 1 << bit;
        frontier[s] |= 1 << bit;
    }
    let mut active: Vec<usize> = (lo..hi).collect();
    let mut next = vec![0u64; n];
    let mut touched = Vec::new();
    let mut depth = 0u64;
    while !active.is_empty() {
        for &u in &active {
            let f = frontier[u];
            for a in g.arcs(u, Direction::Out) {
                let add = f & !seen[a.to];
                if add != 0 {
                    if next[a.to] == 0 {
                        touched.push(a.to);
                    }
                    next[a.to] |= add;
                }
            }
            frontier[u] = 0;
        }
        active.clear();
        for &v in &touched {
            let add = next[v] & !seen[v];
            next[v] = 0;
            if add != 0 {
                seen[v] |= add;
                frontier[v] = add;
                active.push(v);
            }
        }
        touched.clear();
        if !active.is_empty() {
            depth += 1;
        }
    }
    if seen.iter().all(|&s| s == full) {
        Some(depth)
    } else {
        None
    }
}
