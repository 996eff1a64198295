//! Invariants checked on random parameters.

use approx::assert_relative_eq;
use proptest::prelude::*;

use betainv::gammafns::{digamma, gamma_quantile, ln_gamma, reg_lower_gamma, GammaQuantileQuery};
use betainv::quantile::{phi, quantile_wrt_b};
use betainv::series::psi_prime_series;
use betainv::{quantile, reg_inc_beta, reflect, BetaParams, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Shape parameter, log-uniform on [1e-2, 1e3].
fn shape() -> impl Strategy<Value = f64> {
    (-2.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn level() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

/// 96 cases unless PROPTEST_CASES says otherwise.
fn config() -> ProptestConfig {
    let mut c = ProptestConfig::default();
    if std::env::var_os("PROPTEST_CASES").is_none() {
        c.cases = 96;
    }
    c
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn inc_beta_is_a_distribution_function(a in shape(), b in shape(), x in 0.0f64..1.0, dx in 1e-6f64..0.5) {
        let pr = BetaParams::new(a, b, 0.5).unwrap();
        let lo = reg_inc_beta(x, pr).unwrap();
        let hi = reg_inc_beta((x + dx).min(1.0), pr).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo);
    }

    #[test]
    fn inc_beta_reflection(a in shape(), b in shape(), x in 0.001f64..0.999) {
        let pr = BetaParams::new(a, b, 0.5).unwrap();
        let direct = reg_inc_beta(x, pr).unwrap();
        let other = reflect(x, pr).unwrap();
        prop_assert!((direct - other).abs() <= 1e-13, "{direct} vs {other}");
    }

    #[test]
    fn quantile_solves_its_equation(a in shape(), b in shape(), p in level()) {
        let r = quantile(BetaParams::new(a, b, p).unwrap(), &tol()).unwrap();
        prop_assert!(r.residual <= 1e-13);
        prop_assert!(r.q > 0.0 && r.q <= 1.0);
        prop_assert!((r.q + r.one_minus_q - 1.0).abs() <= 4.0 * f64::EPSILON);
        // evaluate on the side where the double carries the point accurately
        let back = if r.q <= 0.5 {
            reg_inc_beta(r.q, BetaParams::new(a, b, p).unwrap()).unwrap()
        } else {
            1.0 - reg_inc_beta(r.one_minus_q, BetaParams::new(b, a, 1.0 - p).unwrap()).unwrap()
        };
        prop_assert!((back - p).abs() <= 1e-12, "I(q) = {back}, p = {p}");
    }

    #[test]
    fn quantile_increases_with_a(a in shape(), ratio in 1.01f64..3.0, b in shape(), p in level()) {
        let q1 = quantile(BetaParams::new(a, b, p).unwrap(), &tol()).unwrap();
        let q2 = quantile(BetaParams::new(a * ratio, b, p).unwrap(), &tol()).unwrap();
        prop_assert!(q2.psi < q1.psi);
    }

    #[test]
    fn quantile_increases_with_p(a in shape(), b in shape(), p in 0.01f64..0.9, dp in 0.01f64..0.09) {
        let q1 = quantile(BetaParams::new(a, b, p).unwrap(), &tol()).unwrap();
        let q2 = quantile(BetaParams::new(a, b, p + dp).unwrap(), &tol()).unwrap();
        prop_assert!(q2.psi < q1.psi);
    }

    #[test]
    fn both_routes_agree(a in shape(), b in shape(), p in level()) {
        let direct = quantile(BetaParams::new(a, b, p).unwrap(), &tol()).unwrap();
        let other = quantile_wrt_b(a, b, p, &tol()).unwrap();
        prop_assert!((direct.q - other.q).abs() <= 2e-13);
    }

    #[test]
    fn phi_moves_with_b_minus_one(a in 0.05f64..50.0, b in prop_oneof![0.2f64..0.95, 1.05f64..8.0], p in level()) {
        let lo = phi(a, b, p, &tol()).unwrap();
        let hi = phi(a * 1.2, b, p, &tol()).unwrap();
        prop_assert_eq!((hi - lo).signum(), (b - 1.0).signum());
    }

    #[test]
    fn phi_between_its_limits(a in shape(), b in prop_oneof![0.2f64..0.95, 1.05f64..8.0], p in level()) {
        let v = phi(a, b, p, &tol()).unwrap();
        let at_zero = -p.ln();
        let at_inf = gamma_quantile(GammaQuantileQuery::new(b, 1.0 - p).unwrap()).unwrap();
        let (lo, hi) = if at_zero < at_inf { (at_zero, at_inf) } else { (at_inf, at_zero) };
        prop_assert!(v >= lo * (1.0 - 1e-12) && v <= hi * (1.0 + 1e-12), "{lo} <= {v} <= {hi}");
    }

    #[test]
    fn derivative_series_is_negative(a in shape(), b in shape(), p in level()) {
        let (d, diag) = psi_prime_series(a, b, p, &tol()).unwrap();
        prop_assert!(d < 0.0);
        prop_assert!(diag.converged);
    }

    #[test]
    fn ln_gamma_recurrence(x in 1e-3f64..1e3) {
        let lhs = ln_gamma(x + 1.0).unwrap();
        let rhs = ln_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }

    #[test]
    fn digamma_recurrence(x in prop_oneof![1e-3f64..1e3, -20.0f64..-0.01]) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn lower_gamma_is_monotone(shape in 0.05f64..50.0, x in 0.0f64..100.0, dx in 1e-6f64..5.0) {
        let lo = reg_lower_gamma(shape, x).unwrap();
        let hi = reg_lower_gamma(shape, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo);
    }

    #[test]
    fn gamma_quantile_round_trip(shape in 0.05f64..50.0, prob in 0.001f64..0.999) {
        let x = gamma_quantile(GammaQuantileQuery::new(shape, prob).unwrap()).unwrap();
        prop_assert!((reg_lower_gamma(shape, x).unwrap() - prob).abs() <= 1e-12);
    }
}

#[test]
fn b_one_is_a_power() {
    for a in [0.01, 0.37, 1.0, 12.5, 900.0] {
        for p in [0.05, 0.5, 0.95] {
            let r = quantile(BetaParams::new(a, 1.0, p).unwrap(), &tol()).unwrap();
            assert_relative_eq!(r.q, p.powf(1.0 / a), max_relative = 1e-13);
        }
    }
}

#[test]
fn a_one_is_a_power_of_the_complement() {
    // I(x; 1, b) = 1 - (1 - x)^b
    for b in [0.3, 2.0, 40.0] {
        for p in [0.05, 0.5, 0.95] {
            let r = quantile(BetaParams::new(1.0, b, p).unwrap(), &tol()).unwrap();
            assert_relative_eq!(r.one_minus_q, (1.0 - p).powf(1.0 / b), max_relative = 1e-13);
        }
    }
}
