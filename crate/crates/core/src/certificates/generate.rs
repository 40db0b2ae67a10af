use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    find_cover_pair, le, new_claim, verify_ub, CertMode, CertParams, Cover, GoodSetClaim,
    UbCertificate,
};
use crate::error::{Error, Result};
use crate::graph::search::HopTable;
use crate::graph::{sssp_tree, Direction, Graph};
use crate::hopsets::{Hopset, HopsetBuilder};
use crate::rng::{derive_seed, RETRY_BUDGET};

/// How [`generate_ub_certificate`] builds its cover.
#[derive(Clone, Copy)]
pub enum GenMode<'a> {
    Unweighted,
    Hopset(&'a dyn HopsetBuilder),
}

impl std::fmt::Debug for GenMode<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenMode::Unweighted => f.write_str("Unweighted"),
            GenMode::Hopset(_) => f.write_str("Hopset"),
        }
    }
}

/// Good sets found so far, keyed by level.
#[derive(Default)]
struct Found {
    out_sets: BTreeMap<usize, GoodSetClaim>,
    in_sets: BTreeMap<usize, GoodSetClaim>,
}

impl Found {
    fn insert(&mut self, claim: GoodSetClaim) {
        let map = match claim.direction {
            Direction::Out => &mut self.out_sets,
            Direction::In => &mut self.in_sets,
        };
        map.entry(claim.level).or_insert(claim);
    }

    fn collect(g: &Graph, params: &CertParams, mode: CertMode, seed: u64) -> Found {
        let mut found = Found::default();
        for ell in 1..params.k {
            if let Ok(claim) = find_cover_pair(g, ell, params, mode, derive_seed(seed, ell as u64))
            {
                found.insert(claim);
            }
        }
        found
    }
}

/// Builds an upper-bound certificate that `verify_ub` accepts. Expected to
/// succeed when `diam(g) <= D`; fails with `GenerationFailure` otherwise.
pub fn generate_ub_certificate(
    g: &Graph,
    params: &CertParams,
    mode: GenMode<'_>,
    seed: u64,
) -> Result<UbCertificate> {
    params.validate()?;
    if g.vertex_count() == 0 {
        return Err(Error::param("graph has no vertices"));
    }
    match mode {
        GenMode::Unweighted => unweighted(g, params, seed),
        GenMode::Hopset(builder) => with_hopset(g, params, builder, seed),
    }
}

fn first_accepted(
    g: &Graph,
    params: &CertParams,
    candidates: impl IntoIterator<Item = UbCertificate>,
) -> Option<UbCertificate> {
    candidates
        .into_iter()
        .find(|c| verify_ub(g, c, params).is_accept())
}

fn ecc_covers(found: &Found, k: usize, mode: CertMode) -> Vec<UbCertificate> {
    let mut out = Vec::new();
    if let Some(s) = found.out_sets.get(&(k - 1)) {
        out.push(UbCertificate {
            mode,
            cover: Cover::EccCoverOut { out_set: s.clone() },
        });
    }
    if let Some(s) = found.in_sets.get(&(k - 1)) {
        out.push(UbCertificate {
            mode,
            cover: Cover::EccCoverIn { in_set: s.clone() },
        });
    }
    out
}

fn unweighted(g: &Graph, params: &CertParams, seed: u64) -> Result<UbCertificate> {
    let mode = CertMode::Unweighted;
    let k = params.k;
    let mut found = Found::collect(g, params, mode, seed);
    found.insert(new_claim(
        g,
        params,
        mode,
        Direction::Out,
        0,
        (0..g.vertex_count()).collect(),
    ));

    let eccs = ecc_covers(&found, k, mode);
    let pairs = (1..=k).filter_map(|ell| {
        let in_set = found.in_sets.get(&(k - ell))?;
        let out_set = found.out_sets.get(&(ell - 1))?;
        let paths = shortest_paths_between(g, &in_set.vertices, &out_set.vertices, params.d)?;
        Some(UbCertificate {
            mode,
            cover: Cover::PairCover {
                ell,
                in_set: in_set.clone(),
                out_set: out_set.clone(),
                paths,
            },
        })
    });
    first_accepted(g, params, eccs.into_iter().chain(pairs))
        .ok_or_else(|| Error::GenerationFailure("no accepted cover; diameter may exceed D".into()))
}

/// Shortest paths from every source to every target, or `None` if one is
/// heavier than `limit`.
fn shortest_paths_between(
    g: &Graph,
    sources: &[usize],
    targets: &[usize],
    limit: f64,
) -> Option<Vec<Vec<usize>>> {
    let per_source: Option<Vec<Vec<Vec<usize>>>> = sources
        .par_iter()
        .map(|&x| {
            let tree = sssp_tree(g, x, Direction::Out).ok()?;
            targets
                .iter()
                .map(|&y| {
                    let d = g.distance_units(tree.dist.get(y))?;
                    if !le(d, limit) {
                        return None;
                    }
                    tree.path(y)
                })
                .collect()
        })
        .collect();
    Some(per_source?.into_iter().flatten().collect())
}

fn with_hopset(
    g: &Graph,
    params: &CertParams,
    builder: &dyn HopsetBuilder,
    seed: u64,
) -> Result<UbCertificate> {
    let k = params.k;
    let mut last_err = None;
    for attempt in 0..RETRY_BUDGET {
        let hopset = match builder.build(g, derive_seed(seed, attempt as u64)) {
            Ok(h) => h,
            Err(e @ Error::InvalidParameter(_)) => return Err(e),
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let beta = hopset.claimed_beta.max(1);
        let mode = CertMode::Hopset { beta };
        let found = Found::collect(g, params, mode, derive_seed(seed, (attempt as u64) << 32));
        let eccs = ecc_covers(&found, k, mode);
        if let Some(c) = first_accepted(g, params, eccs) {
            return Ok(c);
        }
        let Some(augmented) = hopset.augment(g) else {
            last_err = Some(Error::GenerationFailure(
                "hopset does not fit the graph".into(),
            ));
            continue;
        };
        let pairs = (1..k.saturating_sub(1)).filter_map(|ell| {
            let in_set = found.in_sets.get(&ell)?;
            let out_set = found.out_sets.get(&(k - 1 - ell))?;
            hopset_pair(&augmented, params, &hopset, beta, ell, in_set, out_set)
        });
        if let Some(c) = first_accepted(g, params, pairs.map(|cover| UbCertificate { mode, cover }))
        {
            return Ok(c);
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::GenerationFailure("no accepted cover; diameter may exceed D".into())
    }))
}

fn hopset_pair(
    augmented: &Graph,
    params: &CertParams,
    hopset: &Hopset,
    beta: usize,
    ell: usize,
    in_set: &GoodSetClaim,
    out_set: &GoodSetClaim,
) -> Option<Cover> {
    let limit = (1.0 + params.epsilon / 2.0) * params.d;
    let per_source: Option<Vec<Vec<Vec<usize>>>> = in_set
        .vertices
        .par_iter()
        .map(|&x| {
            let table = HopTable::build(augmented, x, beta, true);
            out_set
                .vertices
                .iter()
                .map(|&y| {
                    let d = augmented.distance_units(table.dist(y))?;
                    if !le(d, limit) {
                        return None;
                    }
                    table.path(y)
                })
                .collect()
        })
        .collect();
    Some(Cover::HopsetPairCover {
        ell,
        in_set: in_set.clone(),
        out_set: out_set.clone(),
        hopset: hopset.clone(),
        hop_paths: per_source?.into_iter().flatten().collect(),
    })
}
