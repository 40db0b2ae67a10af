use std::collections::HashSet;

use super::{
    distinct, good_set_check, le, CertMode, CertParams, Cover, GoodSetClaim, RejectCode, Rejection,
    UbCertificate, Verdict,
};
use crate::graph::{sssp, Direction, Distance, Graph};
use crate::hopsets::Hopset;

type Check = std::result::Result<(), Rejection>;

fn reject(code: RejectCode, detail: impl Into<String>) -> Check {
    Err(Rejection::new(code, detail))
}

/// Deterministically checks an upper-bound certificate. Acceptance implies
/// `diam(g) < D'`. Never panics on malformed certificates.
pub fn verify_ub(g: &Graph, cert: &UbCertificate, params: &CertParams) -> Verdict {
    check_ub(g, cert, params).into()
}

fn check_ub(g: &Graph, cert: &UbCertificate, params: &CertParams) -> Check {
    if let Err(e) = params.validate() {
        return reject(RejectCode::InvalidParams, e.to_string());
    }
    if let CertMode::Hopset { beta: 0 } = cert.mode {
        return reject(RejectCode::InvalidParams, "hop bound must be positive");
    }
    if g.vertex_count() == 0 {
        return reject(RejectCode::InvalidParams, "graph has no vertices");
    }
    let k = params.k;
    let mode = cert.mode;
    match &cert.cover {
        Cover::EccCoverOut { out_set } => {
            expect_claim(out_set, Direction::Out, k - 1)?;
            good_set_check(g, out_set, params, mode)?;
            eccentricities_within(g, &out_set.vertices, Direction::In, params.d)
        }
        Cover::EccCoverIn { in_set } => {
            expect_claim(in_set, Direction::In, k - 1)?;
            good_set_check(g, in_set, params, mode)?;
            eccentricities_within(g, &in_set.vertices, Direction::Out, params.d)
        }
        Cover::PairCover {
            ell,
            in_set,
            out_set,
            paths,
        } => {
            if mode != CertMode::Unweighted {
                return reject(RejectCode::ModeMismatch, "pair cover needs unweighted mode");
            }
            let ell = *ell;
            if ell == 0 || ell > k {
                return reject(
                    RejectCode::LevelMismatch,
                    format!("split {ell} outside 1..={k}"),
                );
            }
            expect_claim(in_set, Direction::In, k - ell)?;
            expect_claim(out_set, Direction::Out, ell - 1)?;
            good_set_check(g, in_set, params, mode)?;
            good_set_check(g, out_set, params, mode)?;
            // every edge weighs at least w_min, so weight <= D caps the edge count too
            let max_edges = (params.d / g.w_min() * (1.0 + 1e-9)).floor() as usize;
            check_paths(g, in_set, out_set, paths, max_edges, params.d)
        }
        Cover::HopsetPairCover {
            ell,
            in_set,
            out_set,
            hopset,
            hop_paths,
        } => {
            let CertMode::Hopset { beta } = mode else {
                return reject(
                    RejectCode::ModeMismatch,
                    "hopset pair cover needs hopset mode",
                );
            };
            if hopset.claimed_beta != beta {
                return reject(
                    RejectCode::ModeMismatch,
                    format!(
                        "hopset claims beta {} but mode uses {beta}",
                        hopset.claimed_beta
                    ),
                );
            }
            let ell = *ell;
            if ell == 0 || ell + 2 > k {
                return reject(
                    RejectCode::LevelMismatch,
                    format!("split {ell} outside 1..={}", k.saturating_sub(2)),
                );
            }
            expect_claim(in_set, Direction::In, ell)?;
            expect_claim(out_set, Direction::Out, k - 1 - ell)?;
            good_set_check(g, in_set, params, mode)?;
            good_set_check(g, out_set, params, mode)?;
            let augmented = check_hopset(g, hopset)?;
            let limit = (1.0 + params.epsilon / 2.0) * params.d;
            check_paths(&augmented, in_set, out_set, hop_paths, beta, limit)
        }
    }
}

fn expect_claim(claim: &GoodSetClaim, direction: Direction, level: usize) -> Check {
    if claim.direction != direction || claim.level != level {
        return reject(
            RejectCode::LevelMismatch,
            format!(
                "expected {direction:?} set at level {level}, got {:?} at level {}",
                claim.direction, claim.level
            ),
        );
    }
    Ok(())
}

fn eccentricities_within(g: &Graph, vertices: &[usize], dir: Direction, d: f64) -> Check {
    for &x in vertices {
        let dist = sssp(g, x, dir).expect("claim members validated");
        if !dist.all_within(d) {
            return reject(
                RejectCode::Eccentricity,
                format!("vertex {x} has {dir:?}-eccentricity above {d}"),
            );
        }
    }
    Ok(())
}

/// Every shortcut must be at least as long as the distance it spans.
/// Returns `g` with the shortcuts added.
fn check_hopset(g: &Graph, h: &Hopset) -> std::result::Result<Graph, Rejection> {
    let Some(edges) = h.tick_edges(g) else {
        return Err(Rejection::new(
            RejectCode::InvalidHopset,
            "shortcut endpoint out of range or weight not a multiple of the graph unit",
        ));
    };
    let mut by_source: Vec<Vec<(usize, u64)>> = vec![Vec::new(); g.vertex_count()];
    for &(u, v, w) in &edges {
        by_source[u].push((v, w));
    }
    for (u, targets) in by_source.iter().enumerate().filter(|(_, t)| !t.is_empty()) {
        let dist = sssp(g, u, Direction::Out).expect("valid vertex");
        for &(v, w) in targets {
            if Distance::Finite(w) < dist.get(v) {
                return Err(Rejection::new(
                    RejectCode::HopsetShortens,
                    format!("shortcut ({u}, {v}) is shorter than their distance"),
                ));
            }
        }
    }
    g.with_extra_edges(edges)
        .map_err(|e| Rejection::new(RejectCode::InvalidHopset, e.to_string()))
}

/// Every `(x, x')` in `in_set x out_set` needs a listed walk from `x` to
/// `x'` along edges of `g` with at most `max_edges` edges and weight at most
/// `limit`. Any malformed listed walk is rejected.
fn check_paths(
    g: &Graph,
    in_set: &GoodSetClaim,
    out_set: &GoodSetClaim,
    paths: &[Vec<usize>],
    max_edges: usize,
    limit: f64,
) -> Check {
    let mut covered = HashSet::new();
    for (i, p) in paths.iter().enumerate() {
        let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
            return reject(RejectCode::InvalidPath, format!("path {i} is empty"));
        };
        if let Some(&v) = p.iter().find(|&&v| v >= g.vertex_count()) {
            return reject(
                RejectCode::DanglingVertex,
                format!("path {i} visits unknown vertex {v}"),
            );
        }
        if p.len() - 1 > max_edges {
            return reject(
                RejectCode::PathTooLong,
                format!("path {i} has {} edges, limit {max_edges}", p.len() - 1),
            );
        }
        let mut ticks: u64 = 0;
        for w in p.windows(2) {
            match g.edge_weight(w[0], w[1]) {
                Some(t) => ticks = ticks.saturating_add(t),
                None => {
                    return reject(
                        RejectCode::InvalidPath,
                        format!("path {i} uses missing edge ({}, {})", w[0], w[1]),
                    )
                }
            }
        }
        if !le(g.to_units(ticks), limit) {
            return reject(
                RejectCode::PathTooHeavy,
                format!("path {i} weighs {} > {limit}", g.to_units(ticks)),
            );
        }
        covered.insert((first, last));
    }
    let ins = distinct(&in_set.vertices);
    let outs = distinct(&out_set.vertices);
    for &x in &ins {
        for &y in &outs {
            if !covered.contains(&(x, y)) {
                return reject(RejectCode::MissingPath, format!("no path from {x} to {y}"));
            }
        }
    }
    Ok(())
}
