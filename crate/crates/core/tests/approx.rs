use diamgap::approx::{exact_gap_oracle, gap_binary_search, two_approx, GapAnswer};
use diamgap::graph::{exact_diameter, random_connected};
use diamgap::Graph;
use proptest::prelude::*;

fn diameter(g: &Graph) -> f64 {
    g.distance_units(exact_diameter(g)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn two_approx_brackets_diameter(directed in any::<bool>(), n in 1usize..80, extra in 0usize..100, w in 1u64..10, seed in any::<u64>(), probe in any::<prop::sample::Index>()) {
        let g = random_connected(directed, n, extra, w, seed).unwrap();
        let r = two_approx(&g, Some(probe.index(n))).unwrap();
        let d = diameter(&g);
        prop_assert!(r.lower <= d && d <= r.upper);
        prop_assert_eq!(r.upper, 2.0 * r.lower);
    }

    #[test]
    fn exact_oracle_search_contains_diameter(directed in any::<bool>(), n in 2usize..40, seed in any::<u64>(), alpha in 1.0001f64..2.5, beta in 0.001f64..0.5) {
        let g = random_connected(directed, n, n, 7, seed).unwrap();
        let out = gap_binary_search(&g, exact_gap_oracle(alpha), alpha, beta).unwrap();
        prop_assert!(out.result.contains(diameter(&g)), "{:?} vs {}", out.result, diameter(&g));
        prop_assert!(out.result.ratio <= alpha + beta + 1e-9);
        prop_assert!(out.queries <= 40);
    }
}

#[test]
fn two_approx_based_oracle() {
    // probe eccentricity decides the factor-2 gap, up to ties at 2D
    let oracle = |g: &Graph, d: f64| {
        let r = two_approx(g, None).unwrap();
        if r.lower > d {
            GapAnswer::AtLeast
        } else {
            GapAnswer::AtMost
        }
    };
    for seed in 0..20 {
        let g = random_connected(false, 30, 10, 4, seed).unwrap();
        let out = gap_binary_search(&g, oracle, 2.0, 0.05).unwrap();
        assert!(out.result.ratio <= 2.05 + 1e-9);
    }
}

#[test]
fn queries_use_unit_threshold() {
    let g = Graph::new(false, 3, [(0, 1, 5), (1, 2, 5)]).unwrap();
    let mut seen = Vec::new();
    let oracle = |h: &Graph, d: f64| {
        seen.push((diameter(h), d));
        exact_gap_oracle(1.01)(h, d)
    };
    let out = gap_binary_search(&g, oracle, 1.01, 0.01).unwrap();
    assert!(out.result.contains(10.0));
    assert!(!seen.is_empty());
    assert!(seen.iter().all(|&(_, d)| d == 1.0));
}

#[test]
fn rejects_bad_parameters() {
    let g = Graph::unweighted(false, 2, [(0, 1)]).unwrap();
    assert!(gap_binary_search(&g, exact_gap_oracle(2.0), 0.5, 0.1).is_err());
    assert!(gap_binary_search(&g, exact_gap_oracle(2.0), 2.0, 0.0).is_err());
    let split = Graph::unweighted(true, 2, [(0, 1)]).unwrap();
    assert!(two_approx(&split, None).is_err());
}
