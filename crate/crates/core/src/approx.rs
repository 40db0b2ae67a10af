//! Baseline diameter approximations and a wrapper turning a gap-diameter
//! decision oracle into an approximation by binary search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{eccentricity, exact_diameter, le_tol, Direction, Graph, THRESHOLD_TOL};

/// A bracket `lower <= diam <= upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub lower: f64,
    pub upper: f64,
    /// `upper / lower`, or 1 when both are zero.
    pub ratio: f64,
}

impl ApproxResult {
    pub fn new(lower: f64, upper: f64) -> ApproxResult {
        let ratio = if lower > 0.0 { upper / lower } else { 1.0 };
        ApproxResult {
            lower,
            upper,
            ratio,
        }
    }

    pub fn contains(&self, d: f64) -> bool {
        le_tol(self.lower, d) && le_tol(d, self.upper)
    }
}

/// Eccentricities of one probe vertex bound the diameter within a factor 2.
pub fn two_approx(g: &Graph, probe: Option<usize>) -> Result<ApproxResult> {
    if g.vertex_count() == 0 {
        return Err(Error::param("graph has no vertices"));
    }
    let probe = probe.unwrap_or(0);
    let out = eccentricity(g, probe, Direction::Out)?;
    let inn = eccentricity(g, probe, Direction::In)?;
    let lower = out.max(inn);
    let lower = g.distance_units(lower).ok_or(Error::Disconnected)?;
    Ok(ApproxResult::new(lower, 2.0 * lower))
}

/// Answer of a gap-diameter oracle asked about threshold `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapAnswer {
    /// Diameter exceeds `D`; mandatory when it is at least `alpha D`.
    AtLeast,
    /// Diameter is below `alpha D`; mandatory when it is at most `D`.
    AtMost,
    /// Diameter lies strictly between `D` and `alpha D`.
    Either,
}

/// Outcome of [`gap_binary_search`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOutcome {
    pub result: ApproxResult,
    pub queries: usize,
}

const MAX_QUERIES: usize = 200;

/// Shrinks the [`two_approx`] bracket until `upper / lower <= alpha +
/// beta_acc`. Each query asks `oracle(g / D, 1.0)`: the graph rescaled so
/// the threshold becomes 1.
pub fn gap_binary_search(
    g: &Graph,
    mut oracle: impl FnMut(&Graph, f64) -> GapAnswer,
    alpha: f64,
    beta_acc: f64,
) -> Result<SearchOutcome> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::param(format!(
            "alpha must be at least 1, got {alpha}"
        )));
    }
    if !(beta_acc.is_finite() && beta_acc > 0.0) {
        return Err(Error::param(format!(
            "accuracy must be positive, got {beta_acc}"
        )));
    }
    let start = two_approx(g, None)?;
    let (mut lo, mut hi) = (start.lower, start.upper);
    let target = alpha + beta_acc;
    let mut queries = 0;
    while lo > 0.0 && hi / lo > target {
        if queries == MAX_QUERIES {
            return Err(Error::OracleViolation(format!(
                "no convergence after {MAX_QUERIES} queries"
            )));
        }
        let d = (lo * hi / alpha).sqrt();
        let scaled = g.rescaled(1.0 / d)?;
        queries += 1;
        match oracle(&scaled, 1.0) {
            GapAnswer::AtLeast => lo = lo.max(d),
            GapAnswer::AtMost => hi = hi.min(alpha * d),
            GapAnswer::Either => {
                lo = lo.max(d);
                hi = hi.min(alpha * d);
            }
        }
        if lo > hi * (1.0 + THRESHOLD_TOL) {
            return Err(Error::OracleViolation(format!(
                "bracket inverted to [{lo}, {hi}] after query at {d}"
            )));
        }
    }
    Ok(SearchOutcome {
        result: ApproxResult::new(lo, hi),
        queries,
    })
}

/// A truthful oracle backed by [`exact_diameter`].
pub fn exact_gap_oracle(alpha: f64) -> impl FnMut(&Graph, f64) -> GapAnswer {
    move |g, d| {
        let Some(diam) = g.distance_units(exact_diameter(g)) else {
            return GapAnswer::AtLeast;
        };
        if le_tol(diam, d) {
            GapAnswer::AtMost
        } else if le_tol(alpha * d, diam) {
            GapAnswer::AtLeast
        } else {
            GapAnswer::Either
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_complete() {
        let path = Graph::unweighted(false, 3, [(0, 1), (1, 2)]).unwrap();
        let r = two_approx(&path, Some(0)).unwrap();
        assert_eq!((r.lower, r.upper), (2.0, 4.0));
        let k4 = Graph::unweighted(
            false,
            4,
            (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))),
        )
        .unwrap();
        assert_eq!(two_approx(&k4, Some(2)).unwrap().lower, 1.0);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::unweighted(true, 2, [(0, 1)]).unwrap();
        assert!(matches!(two_approx(&g, None), Err(Error::Disconnected)));
    }

    #[test]
    fn huge_accuracy_keeps_initial_bracket() {
        let g = Graph::unweighted(false, 6, (0..5).map(|i| (i, i + 1))).unwrap();
        let out = gap_binary_search(&g, exact_gap_oracle(2.0), 2.0, 10.0).unwrap();
        assert_eq!(out.queries, 0);
        assert_eq!(out.result, two_approx(&g, None).unwrap());
    }

    #[test]
    fn near_exact_oracle_pins_diameter() {
        let g = Graph::new(false, 5, [(0, 1, 3), (1, 2, 1), (2, 3, 4), (3, 4, 2)]).unwrap();
        let out = gap_binary_search(&g, exact_gap_oracle(1.0001), 1.0001, 0.001).unwrap();
        assert!(out.result.contains(10.0));
        assert!(out.result.ratio <= 1.0011);
    }

    #[test]
    fn constant_oracles_terminate() {
        let g = Graph::unweighted(false, 6, (0..5).map(|i| (i, i + 1))).unwrap();
        for answer in [GapAnswer::AtLeast, GapAnswer::AtMost, GapAnswer::Either] {
            let out = gap_binary_search(&g, |_: &Graph, _: f64| answer, 1.5, 0.01).unwrap();
            assert!(out.result.ratio <= 1.51);
            assert!(out.queries <= 40);
        }
    }
}
