//! Generative property tests for the estimator and interval invariants.

use proptest::prelude::*;

use tailci::{
    dgp_inverse, hill, hill_path, honest_ci_index, naive_ci_index, restore_left_tail_interval,
    select_k, simulate_wiener, sup_statistic, t_statistic, weissman_quantile, BiasBudget,
    DgpConfig, Interval, Method, PathSeed, Sample, SelectionConfig, Target, Thresholds,
};

/// Strictly positive heavy-tail-ish values from inverse-power transforms of
/// uniforms in (0, 1).
fn positive_sample(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(1e-9..1.0f64, 4..max_n), 0.2..2.0f64)
        .prop_map(|(us, xi)| us.into_iter().map(|u| u.powf(-xi)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hill_nonnegative_and_scale_invariant(
        values in positive_sample(120),
        scale in 1e-6..1e6f64,
        k_frac in 0.01..0.99f64,
    ) {
        let sample = Sample::new(values).unwrap();
        let k = ((sample.n() as f64 - 1.0) * k_frac).max(1.0) as usize;
        let base = hill(&sample, k).unwrap().xi_hat;
        prop_assert!(base >= 0.0);
        let scaled = hill(&sample.scaled(scale).unwrap(), k).unwrap().xi_hat;
        prop_assert!((base - scaled).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn hill_path_is_pointwise(values in positive_sample(80)) {
        let sample = Sample::new(values).unwrap();
        let hi = sample.n() - 1;
        let path = hill_path(&sample, 1, hi).unwrap();
        for est in path {
            let lone = hill(&sample, est.k).unwrap();
            prop_assert_eq!(est.xi_hat.to_bits(), lone.xi_hat.to_bits());
        }
    }

    #[test]
    fn honest_width_dominates_naive(
        values in positive_sample(100),
        a in 0.0..5.0f64,
        rho in 0.1..4.0f64,
        q in 1.0..4.0f64,
    ) {
        let sample = Sample::new(values).unwrap();
        let k = sample.n() / 2;
        prop_assume!(k >= 1);
        let budget = BiasBudget::new(a, rho).unwrap();
        let honest = honest_ci_index(&sample, k, q, &budget).unwrap();
        let naive = naive_ci_index(&sample, k, q).unwrap();
        prop_assert!(honest.length() >= naive.length() - 1e-15);
        prop_assert!(honest.lo <= naive.lo + 1e-15 && naive.hi <= honest.hi + 1e-15);
    }

    #[test]
    fn tail_index_intervals_scale_free_quantile_intervals_equivariant(
        values in positive_sample(100),
        scale in 1e-3..1e3f64,
    ) {
        let sample = Sample::new(values).unwrap();
        let scaled = sample.scaled(scale).unwrap();
        let k = (sample.n() * 3) / 4;
        prop_assume!(k >= 2);

        let iv = naive_ci_index(&sample, k, 1.96).unwrap();
        let iv_s = naive_ci_index(&scaled, k, 1.96).unwrap();
        prop_assert!((iv.lo - iv_s.lo).abs() <= 1e-12 * iv.lo.abs().max(1.0));
        prop_assert!((iv.hi - iv_s.hi).abs() <= 1e-12 * iv.hi.abs().max(1.0));

        // quantile estimates scale with the data
        let p = 0.9 * k as f64 / sample.n() as f64;
        prop_assume!(p > 0.0 && p < 1.0);
        let q = weissman_quantile(&sample, k, p).unwrap().q_hat;
        let q_s = weissman_quantile(&scaled, k, p).unwrap().q_hat;
        prop_assert!((q * scale - q_s).abs() <= 1e-12 * q_s.abs().max(1e-300));
    }

    #[test]
    fn reflection_round_trip_identity(
        lo in -10.0..10.0f64,
        width in 0.0..5.0f64,
        cutoff in -5.0..15.0f64,
    ) {
        let original = Interval {
            lo,
            hi: lo + width,
            method: Method::Io,
            target: Target::Quantile { p: 0.01 },
            thresholds: Thresholds::Single { k: 10 },
            empty: false,
        };
        // reflect forward, then restore; exact when the restored lower
        // endpoint stays above the clamp
        let forward = Interval {
            lo: cutoff - original.hi,
            hi: cutoff - original.lo,
            ..original.clone()
        };
        let clamp = -1e9;
        let back = restore_left_tail_interval(&forward, cutoff, clamp).unwrap();
        prop_assert!((back.lo - original.lo).abs() <= 1e-9);
        prop_assert!((back.hi - original.hi).abs() <= 1e-9);
    }

    #[test]
    fn t_statistic_scale_invariant(values in positive_sample(100), scale in 1e-4..1e4f64) {
        let sample = Sample::new(values).unwrap();
        let k = sample.n() / 2;
        prop_assume!(k >= 2);
        let a = t_statistic(&sample, k);
        let b = t_statistic(&sample.scaled(scale).unwrap(), k);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0)),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "scale changed the outcome: {other:?}"),
        }
    }

    #[test]
    fn sup_statistic_nested_ranges(seed in 0u64..5000, r1 in 0.01..1.0f64, r2 in 0.01..1.0f64) {
        let path = simulate_wiener(256, PathSeed::new(77, seed)).unwrap();
        let (wide, narrow) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let s_wide = sup_statistic(&path, wide).unwrap().value;
        let s_narrow = sup_statistic(&path, narrow).unwrap().value;
        prop_assert!(s_wide >= s_narrow);
    }

    #[test]
    fn dgp_inverse_at_one_is_one(xi0 in 0.1..3.0f64, c0 in 0.0..1.0f64) {
        let cfg = DgpConfig::new(xi0, c0).unwrap();
        prop_assert_eq!(dgp_inverse(1.0, &cfg).unwrap(), 1.0);
        // decreasing in t on a coarse grid
        let mut last = f64::INFINITY;
        for i in 1..=20 {
            let v = dgp_inverse(i as f64 / 20.0, &cfg).unwrap();
            prop_assert!(v <= last + 1e-12);
            last = v;
        }
    }
}

proptest! {
    // the selection scan is heavier, keep the case count small
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn selected_threshold_stays_in_bracket(seed in 0u64..1000, c0 in 0.0..1.0f64) {
        let cfg = DgpConfig::new(1.0, c0).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let sample = tailci::draw_sample(200, &cfg, &mut rng).unwrap();
        let sel = select_k(&sample, &SelectionConfig::default()).unwrap();
        prop_assert!(sel.lower <= sel.k && sel.k <= sel.upper);
        prop_assert_eq!(sel.lower, 2);
        prop_assert_eq!(sel.upper, 198);
    }
}
