use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{RejectCode, Rejection, Verdict};
use crate::graph::{eccentricity, gt_tol, Direction, Distance, Graph};

/// A vertex whose eccentricity in `direction` exceeds `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LbWitness {
    pub vertex: usize,
    pub direction: Direction,
}

fn exceeds(g: &Graph, ecc: Distance, d: f64) -> bool {
    match ecc {
        Distance::Unreachable => true,
        Distance::Finite(t) => gt_tol(g.to_units(t), d),
    }
}

/// Returns the smallest vertex whose out-eccentricity exceeds `d`, if any.
/// Some vertex qualifies exactly when `diam(g) > d`.
pub fn generate_lb(g: &Graph, d: f64) -> Option<LbWitness> {
    (0..g.vertex_count())
        .into_par_iter()
        .find_first(|&v| {
            exceeds(
                g,
                eccentricity(g, v, Direction::Out).expect("valid vertex"),
                d,
            )
        })
        .map(|vertex| LbWitness {
            vertex,
            direction: Direction::Out,
        })
}

/// Accepts iff the witness vertex has eccentricity above `d`, which proves
/// `diam(g) > d`.
pub fn verify_lb(g: &Graph, w: &LbWitness, d: f64) -> Verdict {
    if !d.is_finite() || d < 0.0 {
        return Verdict::Reject(Rejection::new(
            RejectCode::InvalidParams,
            format!("bad threshold {d}"),
        ));
    }
    let ecc = match eccentricity(g, w.vertex, w.direction) {
        Ok(e) => e,
        Err(e) => {
            return Verdict::Reject(Rejection::new(RejectCode::DanglingVertex, e.to_string()))
        }
    };
    if exceeds(g, ecc, d) {
        Verdict::Accept
    } else {
        Verdict::Reject(Rejection::new(
            RejectCode::NotFarEnough,
            format!(
                "{:?}-eccentricity of {} is {} <= {d}",
                w.direction,
                w.vertex,
                g.distance_units(ecc).unwrap_or(f64::INFINITY)
            ),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_lower_bound() {
        let g = Graph::unweighted(false, 5, (0..4).map(|i| (i, i + 1))).unwrap();
        let w = generate_lb(&g, 3.0).unwrap();
        assert_eq!(w.vertex, 0);
        assert!(verify_lb(&g, &w, 3.0).is_accept());
        assert!(generate_lb(&g, 4.0).is_none());
        assert!(!verify_lb(&g, &w, 4.0).is_accept());
        let mid = LbWitness {
            vertex: 2,
            direction: Direction::Out,
        };
        assert!(!verify_lb(&g, &mid, 3.0).is_accept());
        let bad = LbWitness {
            vertex: 9,
            direction: Direction::In,
        };
        assert!(!verify_lb(&g, &bad, 1.0).is_accept());
    }

    #[test]
    fn unreachable_counts_as_far() {
        let g = Graph::unweighted(true, 3, [(0, 1), (1, 2)]).unwrap();
        let w = generate_lb(&g, 100.0).unwrap();
        assert!(verify_lb(&g, &w, 100.0).is_accept());
    }
}
