//! The exponential polynomial w, its positive root, h0 and the weight
//! eta whose integral over (0, inf) vanishes.

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::quad::{endpoint_power, integrate, QuadTol};

fn check_b(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("b must be positive, got {b}")))
    }
}

const SERIES_BELOW: f64 = 0.5;

/// w(x) without argument checks. Uses the Taylor expansion near 0, where
/// the closed form cancels.
pub(crate) fn w_raw(x: f64, b: f64) -> f64 {
    if x < SERIES_BELOW {
        // (b/2) x + sum_{k>=3} (2-k) x^k / (2 k!)
        let mut term = x * x / 2.0;
        let mut sum = 0.0;
        for k in 3..40 {
            term *= x / k as f64;
            let t = (2.0 - k as f64) * term / 2.0;
            sum += t;
            if t.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        0.5 * b * x + sum
    } else {
        (1.0 - 0.5 * x) * x.exp() + 0.5 * (b - 1.0) * x - 1.0
    }
}

/// w(x) = (1 - x/2) e^x + (b - 1) x / 2 - 1.
pub fn w_eval(x: f64, b: f64) -> Result<f64> {
    check_b(b)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("w needs finite x >= 0, got {x}")));
    }
    Ok(w_raw(x, b))
}

/// w(x) e^{-x}, finite for large x.
fn w_scaled(x: f64, b: f64) -> f64 {
    if x < SERIES_BELOW {
        w_raw(x, b) * (-x).exp()
    } else {
        (1.0 - 0.5 * x) + (0.5 * (b - 1.0) * x - 1.0) * (-x).exp()
    }
}

/// Root of w and the location of its maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WRootResult {
    pub rho: f64,
    pub w_max_location: f64,
    pub bracket: (f64, f64),
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, what: &'static str) -> Result<(f64, f64, f64)> {
    // f(lo) > 0 > f(hi)
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok((mid, lo, hi));
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok((mid, mid, mid));
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        what,
        iterations: 400,
        lo,
        hi,
    })
}

/// The unique positive root of w.
pub fn find_rho(b: f64) -> Result<WRootResult> {
    check_b(b)?;
    // w'(x) = ((1 - x) e^x + b - 1) / 2 changes sign once
    let dw = |x: f64| {
        if x < 1e-3 {
            // (1 - x) e^x - 1 = -x^2/2 - x^3/3 - ...
            0.5 * (b - x * x * (0.5 + x / 3.0 + x * x / 8.0))
        } else {
            0.5 * ((1.0 - x) * x.exp() + b - 1.0)
        }
    };
    let mut hi = 1.0;
    while dw(hi) > 0.0 {
        hi *= 2.0;
    }
    let (x_max, _, _) = bisect(dw, 0.0, hi, "stationary point of w")?;

    let f = |x: f64| w_raw(x, b);
    let mut hi = 2.0 * x_max.max(1e-3);
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::Convergence {
                what: "root of w",
                iterations: 0,
                lo: x_max,
                hi,
            });
        }
    }
    let (rho, lo, hi) = bisect(f, x_max, hi, "root of w")?;
    if !(w_raw(0.5 * rho, b) > 0.0 && w_raw(2.0 * rho, b) < 0.0) {
        return Err(Error::Convergence {
            what: "sign pattern of w",
            iterations: 0,
            lo,
            hi,
        });
    }
    Ok(WRootResult {
        rho,
        w_max_location: x_max,
        bracket: (lo, hi),
    })
}

/// h0(s) = s w(s) / (e^s - 1)^2, with h0(0) = b / 2.
pub fn h0_eval(s: f64, b: f64) -> Result<f64> {
    check_b(b)?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("h0 needs finite s >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.5 * b);
    }
    if s < SERIES_BELOW {
        let d = s.exp_m1();
        return Ok(s * w_raw(s, b) / (d * d));
    }
    let t = -(-s).exp_m1();
    Ok(s * w_scaled(s, b) * (-s).exp() / (t * t))
}

/// eta(x) = x e^{-2x} (1 - e^{-x})^{b-3} w(x).
pub fn eta_eval(x: f64, b: f64) -> Result<f64> {
    check_b(b)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("eta needs finite x > 0, got {x}")));
    }
    Ok(eta_raw(x, b))
}

fn eta_raw(x: f64, b: f64) -> f64 {
    let w = w_scaled(x, b);
    if w == 0.0 {
        return 0.0;
    }
    let ln_abs = x.ln() - x + (b - 3.0) * (-(-x).exp_m1()).ln() + w.abs().ln();
    w.signum() * ln_abs.exp()
}

const ETA_SPLIT: f64 = 1.0;
const ETA_END: f64 = 80.0;

/// Integral of eta over (0, inf); zero for every b > 0.
pub fn eta_integral_identity(b: f64, tol: &ToleranceConfig) -> Result<f64> {
    check_b(b)?;
    let qt = QuadTol::new(tol.quad_abs_tol * 1e-3, tol.quad_rel_tol);
    // near 0, eta ~ (b/2) x^{b-1}; x = u^k makes the integrand bounded
    let k = endpoint_power(b);
    let near = integrate(
        |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let x = ETA_SPLIT * u.powf(k);
            eta_raw(x, b) * ETA_SPLIT * k * u.powf(k - 1.0)
        },
        0.0,
        1.0,
        qt,
    )?;
    let mid = integrate(|x| eta_raw(x, b), ETA_SPLIT, 10.0, qt)?;
    let far = integrate(|x| eta_raw(x, b), 10.0, ETA_END, qt)?;
    Ok(near.value + mid.value + far.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn w_values() {
        assert_eq!(w_eval(0.0, 3.0).unwrap(), 0.0);
        assert!((w_eval(2.0, 1.0).unwrap() + 1.0).abs() < 1e-15);
        for b in [0.1, 1.0, 4.0] {
            let x = 1e-6;
            assert!((w_eval(x, b).unwrap() / x - 0.5 * b).abs() < 1e-6);
        }
        assert!(w_eval(-1.0, 1.0).is_err());
    }

    #[test]
    fn w_series_matches_closed_form_at_switch() {
        for b in [0.3, 1.0, 7.0] {
            let x = SERIES_BELOW;
            let closed = (1.0 - 0.5 * x) * x.exp() + 0.5 * (b - 1.0) * x - 1.0;
            let below = w_raw(x * (1.0 - 1e-15), b);
            assert!((closed - below).abs() < 1e-14);
        }
    }

    /// Root by plain bisection on the closed form.
    fn rho_oracle(b: f64) -> f64 {
        let w = |x: f64| (1.0 - 0.5 * x) * x.exp() + 0.5 * (b - 1.0) * x - 1.0;
        let (mut lo, mut hi) = (1e-3f64, 10.0f64);
        if b < 1e-3 {
            lo = 1e-4;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if w(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn rho_against_bisection() {
        for b in [1e-6, 1.0, 4.0] {
            let r = find_rho(b).unwrap();
            let oracle = rho_oracle(b);
            // the closed form cancels near 0, which limits the oracle at tiny b
            let rel = if b < 1e-3 { 1e-6 } else { 1e-10 };
            assert!((r.rho - oracle).abs() < rel * oracle, "b = {b}");
            assert!(w_raw(r.rho, b).abs() <= 1e-12);
            assert!(r.rho > r.w_max_location);
        }
        // b = 1: (1 - x/2) e^x = 1 has its positive root near 1.5936
        assert!((find_rho(1.0).unwrap().rho - 1.5936).abs() < 1e-4);
        assert!(find_rho(1e-6).unwrap().rho < 1e-2);
    }

    #[test]
    fn rho_increases_with_b() {
        let mut prev = 0.0;
        for b in [0.1, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let r = find_rho(b).unwrap().rho;
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn h0_limits_and_root() {
        for b in [0.5, 1.0, 3.0] {
            assert!((h0_eval(1e-8, b).unwrap() - 0.5 * b).abs() < 1e-7);
            assert_eq!(h0_eval(0.0, b).unwrap(), 0.5 * b);
            let rho = find_rho(b).unwrap().rho;
            assert!(h0_eval(rho, b).unwrap().abs() < 1e-12);
            assert!(h0_eval(800.0, b).unwrap().is_finite());
        }
    }

    #[test]
    fn h0_decreasing_before_rho() {
        for b in [0.5, 1.0, 3.0] {
            let rho = find_rho(b).unwrap().rho;
            let mut prev = f64::INFINITY;
            for i in 1..=100 {
                let s = rho * i as f64 / 101.0;
                let v = h0_eval(s, b).unwrap();
                assert!(v < prev, "b = {b}, s = {s}");
                prev = v;
            }
        }
    }

    #[test]
    fn eta_has_sign_of_w() {
        for b in [0.5, 3.0] {
            let rho = find_rho(b).unwrap().rho;
            for i in 1..200 {
                let x = i as f64 * 0.05;
                if (x - rho).abs() < 1e-9 {
                    continue;
                }
                let e = eta_eval(x, b).unwrap();
                assert_eq!(e > 0.0, x < rho, "b = {b}, x = {x}");
            }
        }
    }

    #[test]
    fn eta_integral_vanishes() {
        for b in [0.3, 0.5, 1.0, 2.0, 2.5, 3.0, 3.7, 5.0] {
            let v = eta_integral_identity(b, &tol()).unwrap();
            assert!(v.abs() <= 1e-8, "b = {b}: {v}");
        }
    }

    #[test]
    fn eta_integral_b_three_against_simplified_integrand() {
        // for b = 3 the factor (1 - e^{-s})^0 drops out
        let direct = |s: f64| s * (-2.0 * s).exp() * (s.exp() - 1.0 - 0.5 * s * s.exp() + s);
        let qt = QuadTol::new(1e-15, 1e-14);
        let v = integrate(direct, 0.0, 10.0, qt).unwrap().value
            + integrate(direct, 10.0, 80.0, qt).unwrap().value;
        assert!(v.abs() < 1e-12);
        assert!(eta_integral_identity(3.0, &tol()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn eta_integral_limit_average_at_one_and_two() {
        for b in [1.0, 2.0] {
            let direct = eta_integral_identity(b, &tol()).unwrap();
            let avg = 0.5
                * (eta_integral_identity(b - 1e-4, &tol()).unwrap()
                    + eta_integral_identity(b + 1e-4, &tol()).unwrap());
            assert!(direct.abs() <= 1e-8 && avg.abs() <= 1e-8);
        }
    }
}
