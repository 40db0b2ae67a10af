use rayon::prelude::*;

use super::{
    good_set_check, hitting_set, new_claim, size_bound, CertMode, CertParams, GoodSetClaim,
};
use crate::error::{Error, Result};
use crate::graph::{ball_edges, le_tol, sssp, Direction, Graph};
use crate::rng::{derive_seed, RETRY_BUDGET};

fn endpoints(g: &Graph, edges: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = edges
        .iter()
        .flat_map(|&e| {
            let edge = g.edges()[e];
            [edge.u, edge.v]
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn all_ball_edges(g: &Graph, radius: f64, dir: Direction) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .into_par_iter()
        .map(|v| ball_edges(g, v, radius, dir).expect("valid vertex and radius"))
        .collect()
}

fn argmin_len(sets: &[Vec<usize>]) -> usize {
    (0..sets.len()).min_by_key(|&v| sets[v].len()).unwrap_or(0)
}

/// Vertices incident to a hitting set of the given edge sets.
fn edge_hitting_endpoints(g: &Graph, sets: &[Vec<usize>], seed: u64) -> Result<Vec<usize>> {
    let k = sets.iter().map(Vec::len).min().unwrap_or(0);
    if k == 0 {
        return Err(Error::GenerationFailure("some ball has no edges".into()));
    }
    let f = hitting_set(g.edge_count(), sets, k as f64, seed)?;
    Ok(endpoints(g, &f))
}

/// Runs `build` with derived seeds until it yields a claim that checks out.
fn first_good(
    g: &Graph,
    params: &CertParams,
    mode: CertMode,
    seed: u64,
    attempts: usize,
    mut build: impl FnMut(u64) -> Result<GoodSetClaim>,
) -> Option<GoodSetClaim> {
    for attempt in 0..attempts {
        match build(derive_seed(seed, attempt as u64)) {
            Ok(claim) if good_set_check(g, &claim, params, mode).is_ok() => return Some(claim),
            Ok(_) => {}
            Err(Error::GenerationFailure(_)) | Err(Error::InvalidParameter(_)) => return None,
            Err(_) => {}
        }
    }
    None
}

/// Finds a verified good set for split `ell`.
///
/// Unweighted mode returns a good `ell`-out set or a good `(k-ell)`-in set;
/// hopset mode returns a good `ell`-in set or a good `(k-ell)`-out set.
/// Success is guaranteed (with high probability) only when `diam(g) <= D`.
pub fn find_cover_pair(
    g: &Graph,
    ell: usize,
    params: &CertParams,
    mode: CertMode,
    seed: u64,
) -> Result<GoodSetClaim> {
    params.validate()?;
    if ell == 0 || ell >= params.k {
        return Err(Error::param(format!(
            "split level must be in 1..{}, got {ell}",
            params.k
        )));
    }
    if g.vertex_count() == 0 {
        return Err(Error::param("graph has no vertices"));
    }
    let found = match mode {
        CertMode::Unweighted => unweighted_cover(g, ell, params, seed),
        CertMode::Hopset { .. } => hopset_cover(g, ell, params, mode, seed),
    };
    found.ok_or_else(|| {
        Error::GenerationFailure(format!(
            "no good set for split {ell} within {RETRY_BUDGET} attempts"
        ))
    })
}

fn unweighted_cover(g: &Graph, ell: usize, params: &CertParams, seed: u64) -> Option<GoodSetClaim> {
    let mode = CertMode::Unweighted;
    let k = params.k;
    let m = g.edge_count().max(1) as f64;
    let r_n = params.r() / g.w_min();
    let sets = all_ball_edges(g, params.level_radius(k - ell), Direction::Out);
    let v_star = argmin_len(&sets);
    let small_ball = sets[v_star].len() as f64 <= m.powf(1.0 - ell as f64 / k as f64) * r_n;

    let near = |seed: u64| -> Option<GoodSetClaim> {
        let mut universe = endpoints(g, &sets[v_star]);
        if let Err(i) = universe.binary_search(&v_star) {
            universe.insert(i, v_star);
        }
        let radius = params.level_radius(ell) + params.r();
        let from: Vec<_> = universe
            .par_iter()
            .map(|&w| sssp(g, w, Direction::Out).expect("valid vertex"))
            .collect();
        let z: Vec<Vec<usize>> = (0..g.vertex_count())
            .map(|u| {
                (0..universe.len())
                    .filter(|&i| from[i].units(u).is_some_and(|d| le_tol(d, radius)))
                    .collect()
            })
            .collect();
        let min = z.iter().map(Vec::len).min().unwrap_or(0);
        if min == 0 {
            return None;
        }
        first_good(g, params, mode, seed, RETRY_BUDGET, |s| {
            let picked = hitting_set(universe.len(), &z, min as f64, s)?;
            let vertices = picked.into_iter().map(|i| universe[i]).collect();
            Ok(new_claim(g, params, mode, Direction::Out, ell, vertices))
        })
    };
    let far = |seed: u64| {
        first_good(g, params, mode, seed, RETRY_BUDGET, |s| {
            let vertices = edge_hitting_endpoints(g, &sets, s)?;
            Ok(new_claim(g, params, mode, Direction::In, k - ell, vertices))
        })
    };
    if small_ball {
        near(seed).or_else(|| far(derive_seed(seed, 1 << 32)))
    } else {
        far(seed).or_else(|| near(derive_seed(seed, 1 << 32)))
    }
}

fn hopset_cover(
    g: &Graph,
    ell: usize,
    params: &CertParams,
    mode: CertMode,
    seed: u64,
) -> Option<GoodSetClaim> {
    let k = params.k;
    let sets = all_ball_edges(g, params.level_radius(k - ell), Direction::In);
    let u_star = argmin_len(&sets);
    let m1 = size_bound(g, params, mode, Direction::In, ell) - 1.0;
    let small_ball = sets[u_star].len() as f64 <= m1 / 2.0;

    let near = || {
        first_good(g, params, mode, seed, 1, |_| {
            let mut vertices = endpoints(g, &sets[u_star]);
            vertices.push(u_star);
            Ok(new_claim(g, params, mode, Direction::In, ell, vertices))
        })
    };
    let far = |seed: u64| {
        first_good(g, params, mode, seed, RETRY_BUDGET, |s| {
            let vertices = edge_hitting_endpoints(g, &sets, s)?;
            Ok(new_claim(
                g,
                params,
                mode,
                Direction::Out,
                k - ell,
                vertices,
            ))
        })
    };
    if small_ball {
        near().or_else(|| far(seed))
    } else {
        far(seed).or_else(near)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::check_good_set;

    fn complete(n: usize) -> Graph {
        Graph::unweighted(
            true,
            n,
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))),
        )
        .unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::unweighted(true, n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn complete_digraph_cover() {
        let g = complete(6);
        let p = CertParams::new(2, 1.0, 0.5).unwrap();
        let c = find_cover_pair(&g, 1, &p, CertMode::Unweighted, 1).unwrap();
        assert!(check_good_set(&g, &c, &p, CertMode::Unweighted));
    }

    #[test]
    fn directed_cycle_cover() {
        for k in [2, 3, 4] {
            let g = cycle(12);
            let p = CertParams::new(k, 11.0, 0.5).unwrap();
            for mode in [CertMode::Unweighted, CertMode::Hopset { beta: 1 }] {
                let c = find_cover_pair(&g, k - 1, &p, mode, 7).unwrap();
                assert!(check_good_set(&g, &c, &p, mode), "k={k} {mode:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_split() {
        let g = cycle(4);
        let p = CertParams::new(2, 3.0, 0.5).unwrap();
        assert!(find_cover_pair(&g, 0, &p, CertMode::Unweighted, 0).is_err());
        assert!(find_cover_pair(&g, 2, &p, CertMode::Unweighted, 0).is_err());
    }
}
