//! The derivative series for psi = -ln q and the matching series for q'.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::ycurve::{series_quad_tol, t_form_estimate, weighted_v_form, y_estimate, Estimate};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::incbeta::BetaParams;
use crate::quad::integrate;
use crate::quantile::quantile;

/// How a series value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    /// Paired terms summed explicitly before the remainder.
    pub terms_used: usize,
    /// Estimated relative error of the remainder.
    pub tail_estimate: f64,
    pub converged: bool,
    /// Value of the remainder after `terms_used` paired terms.
    pub remainder: f64,
}

/// The summand range of the Laplace variable in the remainder kernel.
const KERNEL_END: f64 = 45.0;

/// (1 - e^{-bu}) / (1 - e^{-u}) with the sign flipped, i.e.
/// expm1(-bu) / -expm1(-u); tends to -b at 0.
fn kernel(u: f64, b: f64) -> f64 {
    if u <= 0.0 {
        return -b;
    }
    (-b * u).exp_m1() / -(-u).exp_m1()
}

/// Sum over n >= n0 of Y_{n+b}/(a+b+n) - Y_n/(a+n), written as a single
/// integral against the kernel above.
fn remainder(a: f64, b: f64, psi: f64, n0: usize, tol: &ToleranceConfig) -> Result<Estimate> {
    let s = a + n0 as f64;
    let qt = series_quad_tol(tol);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let weight = |v: f64| {
        let inner = integrate(|y: f64| (-y).exp() * kernel(v + y / s, b), 0.0, KERNEL_END, qt);
        match inner {
            Ok(r) => r.value / s,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let out = weighted_v_form(n0 as f64, psi, b, weight, qt);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    out
}

fn pair(a: f64, b: f64, psi: f64, n: usize, tol: &ToleranceConfig) -> Result<(f64, f64)> {
    let n = n as f64;
    let up = y_estimate(n + b, psi, b, tol)?;
    let down = y_estimate(n, psi, b, tol)?;
    let value = up.value / (a + b + n) - down.value / (a + n);
    let err = up.err / (a + b + n) + down.err / (a + n);
    Ok((value, err))
}

/// psi'(a) at a known psi.
pub(crate) fn psi_prime_at(a: f64, b: f64, psi: f64, tol: &ToleranceConfig) -> Result<(f64, SeriesDiagnostics)> {
    let mut n_terms = tol.series_direct_terms;
    let mut done = 0;
    let mut partial = 0.0;
    loop {
        for n in done..n_terms {
            partial += pair(a, b, psi, n, tol)?.0;
        }
        done = n_terms;
        let rem = remainder(a, b, psi, n_terms, tol)?;
        let value = partial + rem.value;
        let tail_estimate = if value != 0.0 { rem.err / value.abs() } else { rem.err };
        let converged = tail_estimate <= tol.series_tail_tol;
        if converged {
            return Ok((
                value,
                SeriesDiagnostics {
                    terms_used: n_terms,
                    tail_estimate,
                    converged,
                    remainder: rem.value,
                },
            ));
        }
        if 2 * n_terms > tol.series_max_terms {
            return Err(Error::Truncation {
                terms: n_terms,
                tail: tail_estimate,
            });
        }
        n_terms *= 2;
    }
}

/// psi'(a) for psi(a) = -ln q(a), from the series
/// sum_n Y_{n+b}(psi)/(a+b+n) - sum_n Y_n(psi)/(a+n).
pub fn psi_prime_series(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<(f64, SeriesDiagnostics)> {
    let params = BetaParams::new(a, b, p)?;
    let q = quantile(params, tol)?;
    psi_prime_at(a, b, q.psi, tol)
}

/// q'(a) from the series in t-form ratios
/// sum_n R_n/(a+n) - sum_n R_{n+b}/(a+b+n), with R_c = q Y_c.
///
/// This equals -q psi'(a).
pub fn q_prime_series(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<f64> {
    let params = BetaParams::new(a, b, p)?;
    let res = quantile(params, tol)?;
    let (q, psi) = (res.q, res.psi);
    let n_terms = tol.series_direct_terms;
    let mut partial = 0.0;
    for n in 0..n_terms {
        let n = n as f64;
        let down = t_form_estimate(n, psi, b, tol)?.value;
        let up = t_form_estimate(n + b, psi, b, tol)?.value;
        partial += q * down / (a + n) - q * up / (a + b + n);
    }
    let rem = remainder(a, b, psi, n_terms, tol)?;
    Ok(partial - q * rem.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantile::psi as psi_of;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn fd(a: f64, b: f64, p: f64) -> f64 {
        let h = tol().fd_rel_step * a;
        (psi_of(a + h, b, p, &tol()).unwrap() - psi_of(a - h, b, p, &tol()).unwrap()) / (2.0 * h)
    }

    #[test]
    fn kernel_limits() {
        assert_eq!(kernel(0.0, 2.5), -2.5);
        assert!((kernel(1e-12, 2.5) + 2.5).abs() < 1e-10);
        assert!((kernel(50.0, 2.5) + 1.0).abs() < 1e-15);
        assert!((kernel(0.7, 1.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn b_one_closed_form() {
        for a in [0.05, 1.0, 7.0, 300.0] {
            for p in [0.1, 0.5, 0.9] {
                let (v, d) = psi_prime_series(a, 1.0, p, &tol()).unwrap();
                let want = -(1.0 / p).ln() / (a * a);
                assert!((v - want).abs() <= 1e-9 * want.abs(), "a = {a}, p = {p}: {v} vs {want}");
                assert!(d.converged);
            }
        }
    }

    #[test]
    fn matches_finite_differences() {
        for &(a, b, p) in &[(2.0, 3.0, 0.5), (1.0, 2.0, 0.3), (0.5, 1.5, 0.9)] {
            let (v, _) = psi_prime_series(a, b, p, &tol()).unwrap();
            let f = fd(a, b, p);
            assert!((v - f).abs() <= 1e-5 * f.abs(), "({a}, {b}, {p}): {v} vs {f}");
        }
    }

    #[test]
    fn negative_for_b_above_one() {
        for &(a, b) in &[(0.01, 1.5), (3.0, 7.0), (500.0, 3.0)] {
            assert!(psi_prime_series(a, b, 0.5, &tol()).unwrap().0 < 0.0);
        }
    }

    #[test]
    fn q_prime_closed_form_b_one() {
        for a in [0.5, 2.0, 9.0] {
            let p: f64 = 0.4;
            let want = p.powf(1.0 / a) * (1.0 / p).ln() / (a * a);
            let v = q_prime_series(a, 1.0, p, &tol()).unwrap();
            assert!((v - want).abs() <= 1e-9 * want, "a = {a}: {v} vs {want}");
        }
    }

    #[test]
    fn q_prime_agrees_with_psi_prime() {
        for &(a, b, p) in &[(5.0, 2.0, 0.7), (2.0, 3.0, 0.5), (0.3, 0.5, 0.2)] {
            let q = quantile(BetaParams::new(a, b, p).unwrap(), &tol()).unwrap().q;
            let (dpsi, _) = psi_prime_series(a, b, p, &tol()).unwrap();
            let dq = q_prime_series(a, b, p, &tol()).unwrap();
            assert!((dq + q * dpsi).abs() <= 1e-8 * dq.abs(), "({a}, {b}, {p})");
        }
    }

    #[test]
    fn q_prime_against_finite_differences() {
        let (a, b, p) = (2.0, 3.0, 0.5);
        let h = 1e-4 * a;
        let qa = |x: f64| quantile(BetaParams::new(x, b, p).unwrap(), &tol()).unwrap().q;
        let f = (qa(a + h) - qa(a - h)) / (2.0 * h);
        let v = q_prime_series(a, b, p, &tol()).unwrap();
        assert!((v - f).abs() <= 1e-5 * f.abs());
    }

    #[test]
    fn more_direct_terms_same_value() {
        let mut t = tol();
        let (v64, _) = psi_prime_series(3.0, 2.5, 0.5, &t).unwrap();
        t.series_direct_terms = 8;
        let (v8, d8) = psi_prime_series(3.0, 2.5, 0.5, &t).unwrap();
        assert_eq!(d8.terms_used, 8);
        assert!((v64 - v8).abs() <= 1e-11 * v64.abs());
    }

    // (a, b, p, psi, psi') from 50-digit bisection, psi' by a central
    // difference with h = 1e-10 a
    const HIGH_PRECISION_REF: [(f64, f64, f64, f64, f64); 6] = [
        (2.0, 3.0, 0.5, 0.95262394073914414848, -0.36301691089156283825),
        (1.0, 2.0, 0.3, 1.8119215234989139399, -1.4887909831267883389),
        (0.5, 1.5, 0.9, 0.43287309595974419831, -0.70288723666359399039),
        (5.0, 0.3, 0.1, 0.18972708512321437381, -0.040565412088306047797),
        (0.1, 7.0, 0.5, 9.3101252844135262787, -70.022527403720445479),
        (30.0, 0.5, 0.9, 0.00026538174324665799081, -8.9197617119244796544e-6),
    ];

    #[test]
    fn matches_high_precision_difference() {
        for &(a, b, p, psi_want, want) in &HIGH_PRECISION_REF {
            let s = psi_of(a, b, p, &tol()).unwrap();
            assert!((s - psi_want).abs() <= 1e-12 * psi_want, "psi({a}, {b}, {p})");
            let (v, d) = psi_prime_series(a, b, p, &tol()).unwrap();
            assert!((v - want).abs() <= 1e-10 * want.abs(), "({a}, {b}, {p}): {v} vs {want}");
            assert!(d.converged);
        }
    }
}
