use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{le_tol, Direction, Distance, Graph};
use crate::error::{Error, Result};

const NO_PARENT: usize = usize::MAX;

/// Per-vertex shortest-path distances, as exact ticks of the owning graph.
#[derive(Clone, Debug, PartialEq)]
pub struct DistMap {
    dist: Vec<Distance>,
    unit: f64,
}

impl DistMap {
    pub fn get(&self, v: usize) -> Distance {
        self.dist[v]
    }

    /// Distance converted to real units, `None` when unreachable.
    pub fn units(&self, v: usize) -> Option<f64> {
        self.dist[v].ticks().map(|t| t as f64 * self.unit)
    }

    pub fn as_slice(&self) -> &[Distance] {
        &self.dist
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Largest entry; `Unreachable` if any vertex is unreachable.
    pub fn max(&self) -> Distance {
        self.dist.iter().copied().max().unwrap_or(Distance::ZERO)
    }

    /// True when every vertex is within `bound` real units.
    pub fn all_within(&self, bound: f64) -> bool {
        self.dist.iter().all(|d| match d.ticks() {
            Some(t) => le_tol(t as f64 * self.unit, bound),
            None => false,
        })
    }
}

/// Shortest-path distances plus a parent pointer per reached vertex.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub dist: DistMap,
    parent: Vec<usize>,
    dir: Direction,
}

impl ShortestPathTree {
    /// Vertex sequence of a shortest path between the tree root and `v`,
    /// ordered along the edges' direction: root first for `Out`, `v` first
    /// for `In`.
    pub fn path(&self, v: usize) -> Option<Vec<usize>> {
        if !self.dist.get(v).is_finite() {
            return None;
        }
        let mut seq = vec![v];
        let mut cur = v;
        while self.parent[cur] != NO_PARENT {
            cur = self.parent[cur];
            seq.push(cur);
        }
        if self.dir == Direction::Out {
            seq.reverse();
        }
        Some(seq)
    }
}

fn check_all(g: &Graph, vs: &[usize]) -> Result<()> {
    vs.iter().try_for_each(|&v| g.check_vertex(v))
}

/// Multi-source search returning distances and parent pointers.
fn search(g: &Graph, sources: &[usize], dir: Direction) -> (Vec<Distance>, Vec<usize>) {
    let n = g.vertex_count();
    let mut dist = vec![Distance::Unreachable; n];
    let mut parent = vec![NO_PARENT; n];
    if g.is_uniform() {
        let w = g.w_min_ticks();
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == Distance::Unreachable {
                dist[s] = Distance::ZERO;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u] + w;
            for a in g.arcs(u, dir) {
                if dist[a.to] == Distance::Unreachable {
                    dist[a.to] = du;
                    parent[a.to] = u;
                    queue.push_back(a.to);
                }
            }
        }
    } else {
        let mut ticks = vec![u64::MAX; n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            ticks[s] = 0;
            heap.push(Reverse((0u64, s)));
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > ticks[u] {
                continue;
            }
            for a in g.arcs(u, dir) {
                let nd = d.saturating_add(a.w);
                if nd < ticks[a.to] {
                    ticks[a.to] = nd;
                    parent[a.to] = u;
                    heap.push(Reverse((nd, a.to)));
                }
            }
        }
        for (d, t) in dist.iter_mut().zip(ticks) {
            if t != u64::MAX {
                *d = Distance::Finite(t);
            }
        }
    }
    (dist, parent)
}

pub(crate) fn distances(g: &Graph, sources: &[usize], dir: Direction) -> Vec<Distance> {
    search(g, sources, dir).0
}

pub fn sssp(g: &Graph, source: usize, dir: Direction) -> Result<DistMap> {
    multi_source_sssp(g, &[source], dir)
}

/// `d(X, v)` for `Out`, `d(v, X)` for `In`.
pub fn multi_source_sssp(g: &Graph, sources: &[usize], dir: Direction) -> Result<DistMap> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    check_all(g, sources)?;
    Ok(DistMap {
        dist: distances(g, sources, dir),
        unit: g.unit(),
    })
}

pub fn sssp_tree(g: &Graph, source: usize, dir: Direction) -> Result<ShortestPathTree> {
    g.check_vertex(source)?;
    let (dist, parent) = search(g, &[source], dir);
    Ok(ShortestPathTree {
        dist: DistMap {
            dist,
            unit: g.unit(),
        },
        parent,
        dir,
    })
}

/// Vertex sequence of some shortest `u -> v` path.
pub fn shortest_path(g: &Graph, u: usize, v: usize) -> Result<Option<Vec<usize>>> {
    g.check_vertex(v)?;
    Ok(sssp_tree(g, u, Direction::Out)?.path(v))
}

pub fn eccentricity(g: &Graph, v: usize, dir: Direction) -> Result<Distance> {
    Ok(sssp(g, v, dir)?.max())
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        Err(Error::NegativeRadius(r))
    } else {
        Ok(())
    }
}

/// Vertices within directional distance `r` of `v`, in increasing id order.
pub fn ball(g: &Graph, v: usize, r: f64, dir: Direction) -> Result<Vec<usize>> {
    check_radius(r)?;
    let d = sssp(g, v, dir)?;
    Ok((0..g.vertex_count())
        .filter(|&u| d.units(u).is_some_and(|x| le_tol(x, r)))
        .collect())
}

/// Indices of the edges charged to the ball of radius `r` around `v`:
/// edges leaving the out-ball, edges entering the in-ball, or for
/// undirected graphs every edge incident to the ball. Sorted ascending.
pub fn ball_edges(g: &Graph, v: usize, r: f64, dir: Direction) -> Result<Vec<usize>> {
    let members = ball(g, v, r, dir)?;
    let mut out: Vec<usize> = members
        .iter()
        .flat_map(|&u| g.arcs(u, dir).iter().map(|a| a.edge))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Distances from `u` using at most `beta` edges, by rounds of relaxation.
pub fn hop_limited_from(g: &Graph, u: usize, beta: usize) -> Result<DistMap> {
    g.check_vertex(u)?;
    if beta == 0 {
        return Err(Error::param("hop bound must be at least 1"));
    }
    let table = HopTable::build(g, u, beta, false);
    Ok(DistMap {
        dist: table.dist,
        unit: g.unit(),
    })
}

/// Minimum weight of a `u -> v` path with at most `beta` edges.
pub fn hop_limited_distance(g: &Graph, u: usize, v: usize, beta: usize) -> Result<Distance> {
    g.check_vertex(v)?;
    Ok(hop_limited_from(g, u, beta)?.get(v))
}

/// Hop-limited distances with enough bookkeeping to recover the paths.
pub(crate) struct HopTable {
    source: usize,
    dist: Vec<Distance>,
    /// `parents[r][v]` is the predecessor of `v` on its best path of at most
    /// `r + 1` edges, when that round improved `v`.
    parents: Vec<Vec<usize>>,
}

impl HopTable {
    pub(crate) fn build(g: &Graph, source: usize, beta: usize, keep_paths: bool) -> HopTable {
        let n = g.vertex_count();
        let rounds = beta.min(n.saturating_sub(1));
        let mut cur = vec![u64::MAX; n];
        cur[source] = 0;
        let mut frontier = vec![source];
        let mut in_next = vec![false; n];
        let mut parents = Vec::new();
        for _ in 0..rounds {
            if frontier.is_empty() {
                break;
            }
            // relax from last round's values so a round adds at most one edge
            let prev = cur.clone();
            let mut par = if keep_paths {
                vec![NO_PARENT; n]
            } else {
                Vec::new()
            };
            let mut next = Vec::new();
            for &x in &frontier {
                let dx = prev[x];
                for a in g.arcs(x, Direction::Out) {
                    let nd = dx.saturating_add(a.w);
                    if nd < cur[a.to] {
                        cur[a.to] = nd;
                        if keep_paths {
                            par[a.to] = x;
                        }
                        if !in_next[a.to] {
                            in_next[a.to] = true;
                            next.push(a.to);
                        }
                    }
                }
            }
            for &x in &next {
                in_next[x] = false;
            }
            frontier = next;
            if keep_paths {
                parents.push(par);
            }
        }
        let dist = cur
            .into_iter()
            .map(|t| {
                if t == u64::MAX {
                    Distance::Unreachable
                } else {
                    Distance::Finite(t)
                }
            })
            .collect();
        HopTable {
            source,
            dist,
            parents,
        }
    }

    pub(crate) fn dist(&self, v: usize) -> Distance {
        self.dist[v]
    }

    /// Path realizing `dist(v)`, using at most `beta` edges.
    pub(crate) fn path(&self, v: usize) -> Option<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut seq = vec![v];
        let mut cur = v;
        let mut round = self.parents.len();
        while cur != self.source {
            // find the last round at or before `round` that improved `cur`
            let r = (0..round)
                .rev()
                .find(|&r| self.parents[r][cur] != NO_PARENT)?;
            cur = self.parents[r][cur];
            seq.push(cur);
            round = r;
        }
        seq.reverse();
        Some(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::unweighted(false, 3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn path_graph_distances() {
        let d = sssp(&path3(), 0, Direction::Out).unwrap();
        assert_eq!(
            d.as_slice(),
            &[
                Distance::Finite(0),
                Distance::Finite(1),
                Distance::Finite(2)
            ]
        );
        assert_eq!(
            eccentricity(&path3(), 1, Direction::Out).unwrap(),
            Distance::Finite(1)
        );
        assert_eq!(
            eccentricity(&path3(), 0, Direction::In).unwrap(),
            Distance::Finite(2)
        );
    }

    #[test]
    fn single_vertex() {
        let g = Graph::unweighted(true, 1, []).unwrap();
        assert_eq!(
            sssp(&g, 0, Direction::Out).unwrap().as_slice(),
            &[Distance::ZERO]
        );
    }

    #[test]
    fn invalid_inputs() {
        let g = path3();
        assert!(matches!(
            sssp(&g, 3, Direction::Out),
            Err(Error::InvalidVertex { .. })
        ));
        assert!(matches!(
            multi_source_sssp(&g, &[], Direction::Out),
            Err(Error::EmptySources)
        ));
        assert!(matches!(
            ball(&g, 0, -1.0, Direction::Out),
            Err(Error::NegativeRadius(_))
        ));
        assert!(ball_edges(&g, 0, -0.5, Direction::In).is_err());
    }

    #[test]
    fn directed_unreachable() {
        let g = Graph::unweighted(true, 3, [(0, 1), (1, 2)]).unwrap();
        let d = sssp(&g, 2, Direction::Out).unwrap();
        assert_eq!(d.get(0), Distance::Unreachable);
        assert_eq!(d.max(), Distance::Unreachable);
        let d = sssp(&g, 2, Direction::In).unwrap();
        assert_eq!(d.get(0), Distance::Finite(2));
    }

    #[test]
    fn balls() {
        let g = path3();
        assert_eq!(ball(&g, 1, 0.0, Direction::Out).unwrap(), vec![1]);
        assert_eq!(ball(&g, 0, 1.5, Direction::Out).unwrap(), vec![0, 1]);
        assert_eq!(ball(&g, 1, 1.5, Direction::Out).unwrap(), vec![0, 1, 2]);
        let iso = Graph::unweighted(true, 2, []).unwrap();
        assert!(ball_edges(&iso, 0, 0.0, Direction::Out).unwrap().is_empty());
        let star = Graph::unweighted(true, 4, [(0, 1), (0, 2), (3, 0), (1, 2)]).unwrap();
        assert_eq!(
            ball_edges(&star, 0, 0.0, Direction::Out).unwrap(),
            vec![0, 1]
        );
        assert_eq!(ball_edges(&star, 0, 0.0, Direction::In).unwrap(), vec![2]);
        assert_eq!(
            ball_edges(&path3(), 0, 0.0, Direction::Out).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn hop_limit_triangle() {
        let g = Graph::new(true, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)]).unwrap();
        assert_eq!(
            hop_limited_distance(&g, 0, 2, 1).unwrap(),
            Distance::Finite(3)
        );
        assert_eq!(
            hop_limited_distance(&g, 0, 2, 2).unwrap(),
            Distance::Finite(2)
        );
        assert_eq!(hop_limited_distance(&g, 1, 1, 1).unwrap(), Distance::ZERO);
        let t = HopTable::build(&g, 0, 1, true);
        assert_eq!(t.path(2), Some(vec![0, 2]));
        let t = HopTable::build(&g, 0, 2, true);
        assert_eq!(t.path(2), Some(vec![0, 1, 2]));
    }

    #[test]
    fn trees_recover_paths() {
        let g = Graph::new(true, 4, [(0, 1, 2), (1, 2, 2), (0, 2, 5), (2, 3, 1)]).unwrap();
        let t = sssp_tree(&g, 0, Direction::Out).unwrap();
        assert_eq!(t.path(3), Some(vec![0, 1, 2, 3]));
        let t = sssp_tree(&g, 3, Direction::In).unwrap();
        assert_eq!(t.path(0), Some(vec![0, 1, 2, 3]));
        assert_eq!(shortest_path(&g, 3, 0).unwrap(), None);
    }
}
