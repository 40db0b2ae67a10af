use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng, RETRY_BUDGET};

/// Samples `ceil(2 (M/K) ln n)` elements of `0..universe` uniformly with
/// replacement until the sample meets every set, retrying with derived
/// seeds. Returns the distinct sampled elements in ascending order.
pub fn hitting_set(
    universe: usize,
    sets: &[Vec<usize>],
    min_size: f64,
    seed: u64,
) -> Result<Vec<usize>> {
    if universe == 0 {
        return Err(Error::param("universe is empty"));
    }
    if !(min_size.is_finite() && min_size > 0.0) {
        return Err(Error::param(format!(
            "minimum set size must be positive, got {min_size}"
        )));
    }
    for (i, s) in sets.iter().enumerate() {
        if (s.len() as f64) < min_size {
            return Err(Error::param(format!(
                "set {i} has {} elements, fewer than {min_size}",
                s.len()
            )));
        }
        if let Some(&x) = s.iter().find(|&&x| x >= universe) {
            return Err(Error::param(format!(
                "set {i} contains {x} outside the universe"
            )));
        }
    }
    let ln_n = (sets.len().max(2) as f64).ln();
    let draws = ((2.0 * universe as f64 / min_size * ln_n).ceil() as usize).max(1);
    let mut member = vec![false; universe];
    for attempt in 0..RETRY_BUDGET {
        let mut r = rng(derive_seed(seed, attempt as u64));
        member.iter_mut().for_each(|m| *m = false);
        for _ in 0..draws {
            member[r.gen_range(0..universe)] = true;
        }
        if sets.iter().all(|s| s.iter().any(|&x| member[x])) {
            return Ok((0..universe).filter(|&x| member[x]).collect());
        }
    }
    Err(Error::GenerationFailure(format!(
        "no hitting set found in {RETRY_BUDGET} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_universe_set() {
        let x = hitting_set(10, &[(0..10).collect()], 10.0, 5).unwrap();
        assert!(!x.is_empty());
    }

    #[test]
    fn disjoint_blocks_all_hit() {
        let sets: Vec<Vec<usize>> = (0..5).map(|b| (b * 4..b * 4 + 4).collect()).collect();
        let x = hitting_set(20, &sets, 4.0, 11).unwrap();
        for s in &sets {
            assert!(s.iter().any(|e| x.contains(e)));
        }
        assert!(x.len() >= 5);
    }

    #[test]
    fn bound_for_half_sized_sets() {
        let sets: Vec<Vec<usize>> = (0..10)
            .map(|i| {
                (0..100)
                    .filter(|x| (x + i) % 2 == 0 || x % 7 == i)
                    .take(50)
                    .collect()
            })
            .collect();
        let x = hitting_set(100, &sets, 50.0, 3).unwrap();
        assert!(x.len() <= 10);
    }

    #[test]
    fn rejects_undersized_sets() {
        assert!(hitting_set(10, &[vec![1]], 2.0, 0).is_err());
        assert!(hitting_set(10, &[vec![11]], 1.0, 0).is_err());
        assert!(hitting_set(0, &[], 1.0, 0).is_err());
    }
}
