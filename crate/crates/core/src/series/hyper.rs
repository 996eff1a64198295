//! Relative residual of the hypergeometric form of the defining equation,
//! q^a sum_n c_n q^n / (a + n) = p B(a, b).

use super::binomial::em_tail;
use super::dd::Dd;
use super::ycurve::series_quad_tol;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gammafns::{ln_abs_gamma_signed, ln_gamma_ratio};
use crate::incbeta::{log_beta_unchecked, BetaParams};
use crate::quantile::quantile;

const MAX_DIRECT: usize = 20_000;

/// |LHS - RHS| / RHS with q taken from the quantile solver.
///
/// Both sides are divided by q^a. The series is summed in double-double
/// because for integer b and large a its few terms cancel to about
/// a^{1-b} of their size.
pub fn hyper1_check(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<f64> {
    let params = BetaParams::new(a, b, p)?;
    let psi = quantile(params, tol)?.psi;
    let rhs = (p.ln() + log_beta_unchecked(a, b) + a * psi).exp();
    if !rhs.is_finite() {
        return Err(Error::domain(format!(
            "p B(a, b) / q^a overflows at a = {a}, b = {b}, p = {p}"
        )));
    }
    let terminating = b == b.round();
    let psi_dd = Dd::new(psi);
    let a_dd = Dd::new(a);
    let mut coeff = Dd::ONE;
    let mut sum = Dd::ZERO;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let term = coeff * (-(psi_dd * Dd::new(nf))).exp() / (a_dd + Dd::new(nf));
        sum = sum + term;
        n += 1;
        // c_{n} = c_{n-1} (n - b) / n
        coeff = coeff * (Dd::new(nf + 1.0) - Dd::new(b)) / Dd::new(nf + 1.0);
        if coeff.hi == 0.0 {
            break;
        }
        if !terminating && term.abs().hi < 1e-18 * sum.abs().hi && n > 10 {
            break;
        }
        if n >= MAX_DIRECT {
            break;
        }
    }
    let mut lhs = sum.to_f64();
    if n >= MAX_DIRECT && !terminating && coeff.hi != 0.0 {
        let (ln_abs, sign) = ln_abs_gamma_signed(1.0 - b)?;
        let f = |k: f64| sign * (ln_gamma_ratio(k + 1.0, -b) - ln_abs - k * psi).exp() / (a + k);
        let nf = n as f64;
        // decay of f(k) k: the power k^{-b}, or e^{-k psi} once it dominates
        let decay = b.max(40.0 / (1.0 + 60.0 / (psi * nf)).ln());
        lhs += em_tail(f, nf, decay, series_quad_tol(tol))?;
    }
    Ok((lhs - rhs).abs() / rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn b_one_single_term() {
        for a in [0.01, 1.0, 1e3] {
            assert!(hyper1_check(a, 1.0, 0.3, &tol()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn b_two_two_terms() {
        // q^a (1/a - q/(a+1)) = p / (a (a+1))
        let (a, p) = (3.0, 0.4);
        let q = quantile(BetaParams::new(a, 2.0, p).unwrap(), &tol()).unwrap().q;
        let lhs = q.powf(a) * (1.0 / a - q / (a + 1.0));
        let rhs = p / (a * (a + 1.0));
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        assert!(hyper1_check(a, 2.0, p, &tol()).unwrap() <= 1e-12);
    }

    #[test]
    fn generic_values() {
        for &(a, b, p) in &[(2.0, 2.5, 0.5), (0.01, 0.3, 0.9), (1e3, 0.3, 0.9), (1e3, 7.0, 0.1), (1e3, 1.5, 0.5), (50.0, 3.0, 0.9)] {
            let r = hyper1_check(a, b, p, &tol()).unwrap();
            assert!(r <= 1e-9, "({a}, {b}, {p}): {r}");
        }
    }
}
