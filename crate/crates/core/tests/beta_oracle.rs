//! Incomplete beta function against adaptive Simpson integration of the
//! Beta density, with the normalizing constant integrated the same way.

mod support;

use clusterability::hopkins::beta::{beta_cdf, beta_quantile};
use proptest::prelude::*;
use support::{oracle_beta_cdf as oracle_cdf, oracle_beta_quantile as oracle_quantile};

#[test]
fn cdf_matches_numerical_integration() {
    for &(a, b) in &[(1.0, 1.0), (2.0, 2.0), (2.0, 5.0), (5.0, 5.0), (7.5, 3.0), (10.0, 10.0), (25.0, 25.0)] {
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let got = beta_cdf(x, a, b).unwrap();
            let want = oracle_cdf(x, a, b);
            assert!((got - want).abs() < 1e-10, "I_{x}({a}, {b}) = {got}, oracle {want}");
        }
    }
}

/// Lower 5% point of Beta(5, 5), from `oracle_quantile`.
const BETA55_Q05: f64 = 0.251_367_627_408_177_3;

#[test]
fn frozen_quantile_of_beta_5_5() {
    assert!((oracle_quantile(0.05, 5.0, 5.0) - BETA55_Q05).abs() < 1e-12);
    assert!((beta_cdf(BETA55_Q05, 5.0, 5.0).unwrap() - 0.05).abs() < 1e-10);
    assert!((beta_quantile(0.05, 5.0, 5.0).unwrap() - BETA55_Q05).abs() < 1e-9);
}

#[test]
fn symmetry_identities() {
    for m in [1.0, 3.0, 8.0, 20.0] {
        for x in [0.1, 0.3, 0.45] {
            let lo = beta_cdf(x, m, m).unwrap();
            let hi = beta_cdf(1.0 - x, m, m).unwrap();
            assert!((lo + hi - 1.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn quantile_round_trip(p in 0.001f64..0.999, a in 0.5f64..60.0, b in 0.5f64..60.0) {
        let q = beta_quantile(p, a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
        prop_assert!((beta_cdf(q, a, b).unwrap() - p).abs() <= 1e-8);
    }

    #[test]
    fn cdf_is_monotone(x in 0.0f64..1.0, dx in 0.0f64..0.2, a in 0.5f64..40.0, b in 0.5f64..40.0) {
        let y = (x + dx).min(1.0);
        prop_assert!(beta_cdf(x, a, b).unwrap() <= beta_cdf(y, a, b).unwrap() + 1e-15);
    }
}

#[test]
fn round_trip_and_symmetry_grid() {
    support::check_beta_round_trip_and_symmetry().unwrap();
}
