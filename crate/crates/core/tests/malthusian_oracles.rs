//! Malthusian root and limit law against values computed independently in
//! 40-digit arithmetic (direct series summation plus a secant root finder).

use depref::analytics::{inverse_attachment_limit, linear_attachment_limit};
use depref::malthusian::{
    limit_degree_pmf, pmf_stats, rho_hat, solve_lambda_star, DEFAULT_TOL,
};

const ROOTS: [(f64, f64, f64); 5] = [
    (1.0, 0.0, 0.641_923_987_771_781_1),
    (0.5, 1.0, 0.608_014_537_772_356_6),
    (0.25, 0.0, 0.885_307_172_429_538_8),
    (1.0, 5.0, 0.146_793_186_239_813_4),
    (0.75, 0.5, 0.565_263_649_198_339_3),
];

#[test]
fn roots_match_high_precision_reference() {
    for (alpha, delta, expected) in ROOTS {
        let got = solve_lambda_star(alpha, delta, DEFAULT_TOL).unwrap().lambda_star;
        assert!((got - expected).abs() < 1e-13, "alpha={alpha} delta={delta}: {got} vs {expected}");
    }
}

#[test]
fn grid_scan_brackets_the_unit_exponent_root() {
    // rho_hat is decreasing, so the last grid point with rho_hat > 1 sits just below the root.
    let mut below = None;
    for i in 0..=1000 {
        let lambda = 0.6 + 1e-4 * f64::from(i);
        if rho_hat(lambda, 1.0, 0.0, 1e-14).unwrap().value > 1.0 {
            below = Some(lambda);
        }
    }
    let below = below.unwrap();
    let root = solve_lambda_star(1.0, 0.0, DEFAULT_TOL).unwrap().lambda_star;
    assert!(root > below && root < below + 1e-4);
    assert!((below - 0.6419).abs() < 1e-9);
}

#[test]
fn limit_law_reference_values() {
    let pmf = limit_degree_pmf(1.0, 0.0, 1e-16).unwrap();
    assert!((pmf.pk(1) - 0.390_958_407_668_385_4).abs() < 1e-11);
    let stats = pmf_stats(&pmf);
    assert_eq!(stats.mode, 1);
    assert!((stats.mean - 2.0).abs() < 1e-10);
    assert!(stats.mean_error_bound < 1e-12);
    // P(X >= 2) = 1 - p_1
    assert!((pmf.tail_product(2) - (1.0 - pmf.pk(1))).abs() < 1e-14);
}

#[test]
fn attachment_limit_reference_values() {
    let lambda = 0.641_923_987_771_781_1;
    let expected = [0.609_041_592_331_614_6, 0.266_673_438_360_826_6, 0.091_146_351_015_902_53];
    for (k, e) in (1..=3).zip(expected) {
        assert!((inverse_attachment_limit(k, 1.0, 0.0, lambda) - e).abs() < 1e-14);
    }
    assert_eq!(linear_attachment_limit(3), 0.125);
}
