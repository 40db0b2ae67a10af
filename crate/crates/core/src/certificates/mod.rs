//! Upper-bound certificates for the gap-diameter promise problem and
//! lower-bound witnesses, with deterministic verifiers.
//!
//! An accepted upper-bound certificate proves `diam(G) < (2 - 1/k + eps) D`;
//! an accepted lower-bound witness proves `diam(G) > D`.

mod cover;
mod generate;
mod hitting;
mod lower;
mod verify;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{le_tol, multi_source_sssp, Direction, Graph};
use crate::hopsets::Hopset;

pub use cover::find_cover_pair;
pub use generate::{generate_ub_certificate, GenMode};
pub use hitting::hitting_set;
pub use lower::{generate_lb, verify_lb, LbWitness};
pub use verify::verify_ub;

/// Parameters `k`, `D` and `eps` of one gap-diameter question.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertParams {
    pub k: usize,
    #[serde(rename = "D")]
    pub d: f64,
    pub epsilon: f64,
}

impl CertParams {
    pub fn new(k: usize, d: f64, epsilon: f64) -> Result<CertParams> {
        let p = CertParams { k, d, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::param(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::param(format!("D must be positive, got {}", self.d)));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::param(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Slack radius `r = eps * D / 2`.
    pub fn r(&self) -> f64 {
        self.epsilon * self.d / 2.0
    }

    /// Upper threshold `D' = (2 - 1/k + eps) D`.
    pub fn d_prime(&self) -> f64 {
        (2.0 - 1.0 / self.k as f64 + self.epsilon) * self.d
    }

    fn level_radius(&self, level: usize) -> f64 {
        level as f64 / self.k as f64 * self.d
    }
}

/// Which family of good sets and covers a certificate uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertMode {
    /// Sets sized by `W_max / W_min` and `1/r`, explicit paths of at most
    /// `D / W_min` edges.
    Unweighted,
    /// Sets sized by the hop bound `beta`, hop paths through a hopset.
    Hopset { beta: usize },
}

/// A vertex set claimed to be good at `level` in `direction`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodSetClaim {
    pub direction: Direction,
    pub level: usize,
    pub vertices: Vec<usize>,
    /// Informational; verifiers recompute the bound.
    pub size_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Cover {
    /// Good `(k-1)`-out set whose members all have in-eccentricity at most `D`.
    EccCoverOut { out_set: GoodSetClaim },
    /// Good `(k-1)`-in set whose members all have out-eccentricity at most `D`.
    EccCoverIn { in_set: GoodSetClaim },
    /// Good `(k-ell)`-in and `(ell-1)`-out sets with a path of weight at most
    /// `D` from every in-set member to every out-set member.
    PairCover {
        ell: usize,
        in_set: GoodSetClaim,
        out_set: GoodSetClaim,
        paths: Vec<Vec<usize>>,
    },
    /// Good `ell`-in and `(k-1-ell)`-out sets joined by paths of at most
    /// `beta` edges and weight at most `(1 + eps/2) D` in `G` plus a hopset.
    HopsetPairCover {
        ell: usize,
        in_set: GoodSetClaim,
        out_set: GoodSetClaim,
        hopset: Hopset,
        hop_paths: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UbCertificate {
    pub mode: CertMode,
    pub cover: Cover,
}

impl UbCertificate {
    pub fn variant_name(&self) -> &'static str {
        match self.cover {
            Cover::EccCoverOut { .. } => "ecc_cover_out",
            Cover::EccCoverIn { .. } => "ecc_cover_in",
            Cover::PairCover { .. } => "pair_cover",
            Cover::HopsetPairCover { .. } => "hopset_pair_cover",
        }
    }
}

/// Serialized form of either certificate kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    UpperBound {
        params: CertParams,
        certificate: UbCertificate,
    },
    LowerBound {
        #[serde(rename = "D")]
        d: f64,
        witness: LbWitness,
    },
}

impl Document {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Document> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Document> {
        Document::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectCode {
    InvalidParams,
    ModeMismatch,
    LevelMismatch,
    DanglingVertex,
    EmptySet,
    SizeBound,
    NotGood,
    Eccentricity,
    MissingPath,
    InvalidPath,
    PathTooLong,
    PathTooHeavy,
    InvalidHopset,
    HopsetShortens,
    NotFarEnough,
}

impl RejectCode {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectCode::InvalidParams => "invalid_params",
            RejectCode::ModeMismatch => "mode_mismatch",
            RejectCode::LevelMismatch => "level_mismatch",
            RejectCode::DanglingVertex => "dangling_vertex",
            RejectCode::EmptySet => "empty_set",
            RejectCode::SizeBound => "size_bound",
            RejectCode::NotGood => "not_good",
            RejectCode::Eccentricity => "eccentricity",
            RejectCode::MissingPath => "missing_path",
            RejectCode::InvalidPath => "invalid_path",
            RejectCode::PathTooLong => "path_too_long",
            RejectCode::PathTooHeavy => "path_too_heavy",
            RejectCode::InvalidHopset => "invalid_hopset",
            RejectCode::HopsetShortens => "hopset_shortens",
            RejectCode::NotFarEnough => "not_far_enough",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub code: RejectCode,
    pub detail: String,
}

impl Rejection {
    pub(crate) fn new(code: RejectCode, detail: impl Into<String>) -> Rejection {
        Rejection {
            code,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl From<std::result::Result<(), Rejection>> for Verdict {
    fn from(r: std::result::Result<(), Rejection>) -> Verdict {
        match r {
            Ok(()) => Verdict::Accept,
            Err(e) => Verdict::Reject(e),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("ACCEPT"),
            Verdict::Reject(r) => write!(f, "REJECT {}: {}", r.code.as_str(), r.detail),
        }
    }
}

/// Natural log of the edge count, floored at `ln 2` so tiny graphs keep a
/// positive bound.
fn ln_m(g: &Graph) -> f64 {
    (g.edge_count().max(2) as f64).ln()
}

/// Maximum size of a good set at `level`, including one element of slack.
pub fn size_bound(
    g: &Graph,
    params: &CertParams,
    mode: CertMode,
    direction: Direction,
    level: usize,
) -> f64 {
    let m = g.edge_count().max(1) as f64;
    let k = params.k as f64;
    let core = 8.0 * m.powf(1.0 - level as f64 / k) * ln_m(g);
    let factor = match (mode, direction) {
        (CertMode::Unweighted, Direction::Out) => g.w_max() / g.w_min(),
        (CertMode::Unweighted, Direction::In) => g.w_min() / params.r(),
        (CertMode::Hopset { beta }, _) => (beta.max(1) as f64).powf(-1.0 + 2.0 * level as f64 / k),
    };
    core * factor + 1.0
}

/// Distance every vertex must be within for a good set at `level`.
pub fn goodness_radius(
    params: &CertParams,
    mode: CertMode,
    direction: Direction,
    level: usize,
) -> f64 {
    let base = params.level_radius(level);
    match (mode, direction) {
        (CertMode::Unweighted, Direction::Out) => base + params.r(),
        _ => base,
    }
}

fn check_set_members(g: &Graph, vertices: &[usize]) -> std::result::Result<(), Rejection> {
    if vertices.is_empty() {
        return Err(Rejection::new(RejectCode::EmptySet, "claimed set is empty"));
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Rejection::new(
            RejectCode::DanglingVertex,
            format!("vertex {v} not in graph with {} vertices", g.vertex_count()),
        ));
    }
    Ok(())
}

fn distinct(vertices: &[usize]) -> Vec<usize> {
    let mut v = vertices.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Size and goodness checks on a claim, with the failure reason.
pub(crate) fn good_set_check(
    g: &Graph,
    claim: &GoodSetClaim,
    params: &CertParams,
    mode: CertMode,
) -> std::result::Result<(), Rejection> {
    if claim.level > params.k {
        return Err(Rejection::new(
            RejectCode::LevelMismatch,
            format!("level {} exceeds k", claim.level),
        ));
    }
    check_set_members(g, &claim.vertices)?;
    let members = distinct(&claim.vertices);
    let bound = size_bound(g, params, mode, claim.direction, claim.level);
    if members.len() as f64 > bound {
        return Err(Rejection::new(
            RejectCode::SizeBound,
            format!("{} vertices exceed bound {bound:.3}", members.len()),
        ));
    }
    let radius = goodness_radius(params, mode, claim.direction, claim.level);
    let dist = multi_source_sssp(g, &members, claim.direction).expect("members validated");
    if !dist.all_within(radius) {
        return Err(Rejection::new(
            RejectCode::NotGood,
            format!(
                "some vertex is farther than {radius} from the {:?} set",
                claim.direction
            ),
        ));
    }
    Ok(())
}

/// True iff the claim respects its size bound and every vertex is within
/// the level's goodness radius of (or from) the set.
pub fn check_good_set(
    g: &Graph,
    claim: &GoodSetClaim,
    params: &CertParams,
    mode: CertMode,
) -> bool {
    params.validate().is_ok() && good_set_check(g, claim, params, mode).is_ok()
}

pub(crate) fn new_claim(
    g: &Graph,
    params: &CertParams,
    mode: CertMode,
    direction: Direction,
    level: usize,
    vertices: Vec<usize>,
) -> GoodSetClaim {
    GoodSetClaim {
        direction,
        level,
        vertices: distinct(&vertices),
        size_bound: size_bound(g, params, mode, direction, level),
    }
}

pub(crate) fn le(a: f64, b: f64) -> bool {
    le_tol(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::unweighted(
            true,
            n,
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))),
        )
        .unwrap()
    }

    #[test]
    fn params_derived_values() {
        let p = CertParams::new(3, 6.0, 0.5).unwrap();
        assert_eq!(p.r(), 1.5);
        assert!((p.d_prime() - (2.0 - 1.0 / 3.0 + 0.5) * 6.0).abs() < 1e-12);
        assert!(CertParams::new(1, 6.0, 0.5).is_err());
        assert!(CertParams::new(2, 0.0, 0.5).is_err());
        assert!(CertParams::new(2, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn all_vertices_good_at_level_zero() {
        let g = complete(5);
        let p = CertParams::new(2, 1.0, 0.5).unwrap();
        let claim = new_claim(
            &g,
            &p,
            CertMode::Unweighted,
            Direction::Out,
            0,
            (0..5).collect(),
        );
        assert!(check_good_set(&g, &claim, &p, CertMode::Unweighted));
        let empty = GoodSetClaim {
            vertices: vec![],
            ..claim.clone()
        };
        assert!(!check_good_set(&g, &empty, &p, CertMode::Unweighted));
        let dangling = GoodSetClaim {
            vertices: vec![7],
            ..claim
        };
        assert!(!check_good_set(&g, &dangling, &p, CertMode::Unweighted));
    }

    #[test]
    fn singleton_on_path_needs_radius() {
        let g = Graph::unweighted(false, 5, (0..4).map(|i| (i, i + 1))).unwrap();
        let p = CertParams::new(2, 4.0, 0.5).unwrap();
        // level 1 OUT radius is 2 + 1 = 3
        let mid = new_claim(&g, &p, CertMode::Unweighted, Direction::Out, 1, vec![2]);
        assert!(check_good_set(&g, &mid, &p, CertMode::Unweighted));
        let end = new_claim(&g, &p, CertMode::Unweighted, Direction::Out, 1, vec![0]);
        assert!(!check_good_set(&g, &end, &p, CertMode::Unweighted));
        // level 1 IN radius is 2
        let mid_in = new_claim(&g, &p, CertMode::Unweighted, Direction::In, 1, vec![2]);
        assert!(check_good_set(&g, &mid_in, &p, CertMode::Unweighted));
        let off_in = new_claim(&g, &p, CertMode::Unweighted, Direction::In, 1, vec![1]);
        assert!(!check_good_set(&g, &off_in, &p, CertMode::Unweighted));
    }

    #[test]
    fn verdict_display() {
        assert_eq!(Verdict::Accept.to_string(), "ACCEPT");
        let r = Verdict::Reject(Rejection::new(RejectCode::NotGood, "x"));
        assert_eq!(r.to_string(), "REJECT not_good: x");
    }
}
