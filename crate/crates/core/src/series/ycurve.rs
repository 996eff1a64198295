//! The ratio integrals Y_c(psi), by two independent substitutions.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::quad::{endpoint_power, integrate, QuadTol};

pub(crate) fn check_y_args(c: f64, psi: f64, b: f64) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("c must be finite and >= 0, got {c}")));
    }
    if !(psi > 0.0 && psi.is_finite()) {
        return Err(Error::domain(format!("psi must be positive, got {psi}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("b must be positive, got {b}")));
    }
    Ok(())
}

/// e^{-c v} decays below e^{-CUTOFF} of its start past v = CUTOFF / c.
const CUTOFF: f64 = 50.0;

pub(crate) fn series_quad_tol(tol: &ToleranceConfig) -> QuadTol {
    QuadTol::new(0.0, tol.quad_rel_tol)
}

/// ln(1 - e^{-d}) given d and ln d; the second argument keeps it finite
/// when d itself has underflowed.
fn ln_one_minus_exp_neg(d: f64, ln_d: f64) -> f64 {
    if d < 1e-8 {
        ln_d - 0.5 * d
    } else {
        (-(-d).exp_m1()).ln()
    }
}

/// A computed integral with its error estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Estimate {
    pub value: f64,
    pub err: f64,
}

/// \int_0^psi e^{-c v} g(v) m(v) dv with
/// g(v) = ((1 - e^{v - psi}) / (1 - e^{-psi}))^{b-1}.
pub(crate) fn weighted_v_form<M: Fn(f64) -> f64>(
    c: f64,
    psi: f64,
    b: f64,
    m: M,
    qt: QuadTol,
) -> Result<Estimate> {
    let ln_norm = (-(-psi).exp_m1()).ln();
    let half = 0.5 * psi;

    let upper = if c > 0.0 { half.min(CUTOFF / c) } else { half };
    let head = integrate(
        |v: f64| {
            let lg = (b - 1.0) * ((-(v - psi).exp_m1()).ln() - ln_norm);
            (lg - c * v).exp() * m(v)
        },
        0.0,
        upper,
        qt,
    )?;

    if c * half > 700.0 {
        return Ok(Estimate {
            value: head.value,
            err: head.abs_err,
        });
    }
    // v = psi - d, d = (psi/2) u^k
    let k = endpoint_power(b);
    let ln_scale = (half * k).ln();
    let tail = integrate(
        |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let ln_d = half.ln() + k * u.ln();
            let d = ln_d.exp();
            let lg = (b - 1.0) * (ln_one_minus_exp_neg(d, ln_d) - ln_norm);
            (lg - c * (psi - d) + ln_scale + (k - 1.0) * u.ln()).exp() * m(psi - d)
        },
        0.0,
        1.0,
        qt,
    )?;
    Ok(Estimate {
        value: head.value + tail.value,
        err: head.abs_err + tail.abs_err,
    })
}

pub(crate) fn y_estimate(c: f64, psi: f64, b: f64, tol: &ToleranceConfig) -> Result<Estimate> {
    if b == 1.0 {
        let value = if c == 0.0 { psi } else { -(-c * psi).exp_m1() / c };
        return Ok(Estimate { value, err: 0.0 });
    }
    weighted_v_form(c, psi, b, |_| 1.0, series_quad_tol(tol))
}

/// Y_c(psi) = \int_0^psi e^{ct} (1 - e^{-t})^{b-1} dt / (e^{c psi} (1 - e^{-psi})^{b-1}).
pub fn y_value(c: f64, psi: f64, b: f64, tol: &ToleranceConfig) -> Result<f64> {
    check_y_args(c, psi, b)?;
    Ok(y_estimate(c, psi, b, tol)?.value)
}

/// Y_c(psi) through the variable t = e^{-t'}:
/// q^c \int_q^1 t^{-c-1} ((1 - t) / (1 - q))^{b-1} dt with q = e^{-psi}.
pub fn y_value_t_form(c: f64, psi: f64, b: f64, tol: &ToleranceConfig) -> Result<f64> {
    check_y_args(c, psi, b)?;
    Ok(t_form_estimate(c, psi, b, tol)?.value)
}

pub(crate) fn t_form_estimate(c: f64, psi: f64, b: f64, tol: &ToleranceConfig) -> Result<Estimate> {
    let qt = series_quad_tol(tol);
    let q = (-psi).exp();
    let one_minus_q = -(-psi).exp_m1();
    let ln_one_minus_q = one_minus_q.ln();

    // t = q (1 + r) on [q, (1 + q)/2]; the kernel (1 + r)^{-c-1} has scale 1/(c+1)
    let r_end = one_minus_q / (2.0 * q);
    let ratio = q / one_minus_q;
    let near = |r: f64| {
        let lg = -(c + 1.0) * r.ln_1p() + (b - 1.0) * (-ratio * r).ln_1p();
        lg.exp()
    };
    let mut value = 0.0;
    let mut err = 0.0;
    let mut lo = 0.0;
    let mut width = 1.0 / (c + 1.0);
    while lo < r_end {
        let hi = (lo + width).min(r_end);
        let piece = integrate(near, lo, hi, qt)?;
        value += piece.value;
        err += piece.abs_err;
        lo = hi;
        width *= 2.0;
        // remaining mass is below (1 + lo)^{-c} / c relative to the start
        if (c + 1.0) * lo.ln_1p() > 60.0 + (1.0 + lo).ln() && piece.value <= 1e-18 * value {
            break;
        }
    }

    // 1 - t = sigma = ((1 - q)/2) u^k on [(1 + q)/2, 1]
    if c * psi < 700.0 {
        let k = endpoint_power(b);
        let half = 0.5 * one_minus_q;
        let ln_scale = (half * k).ln();
        let far = integrate(
            |u: f64| {
                if u == 0.0 {
                    return 0.0;
                }
                let ln_sigma = half.ln() + k * u.ln();
                let sigma = ln_sigma.exp();
                let lg = -(c + 1.0) * (-sigma).ln_1p() - c * psi
                    + (b - 1.0) * (ln_sigma - ln_one_minus_q);
                (lg + ln_scale + (k - 1.0) * u.ln()).exp()
            },
            0.0,
            1.0,
            qt,
        )?;
        value += far.value;
        err += far.abs_err;
    }
    Ok(Estimate { value, err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn b_one_closed_form() {
        for &(c, psi) in &[(0.5, 0.1), (2.0, 1.0), (30.0, 3.0), (1e3, 0.01)] {
            let want = -(-c * psi as f64).exp_m1() / c;
            let v = weighted_v_form(c, psi, 1.0, |_| 1.0, series_quad_tol(&tol())).unwrap().value;
            assert!((v - want).abs() < 1e-13 * want);
            let t = y_value_t_form(c, psi, 1.0, &tol()).unwrap();
            assert!((t - want).abs() < 1e-12 * want, "c = {c}, psi = {psi}: {t} vs {want}");
        }
    }

    #[test]
    fn tiny_b_endpoint_does_not_overflow() {
        // the substitution exponent is large here and u^k underflows
        for b in [0.036, 0.01] {
            for psi in [0.5, 1.4, 20.0] {
                let v = y_value(1.0, psi, b, &tol()).unwrap();
                let t = y_value_t_form(1.0, psi, b, &tol()).unwrap();
                assert!(v.is_finite() && v > 0.0);
                assert!((v - t).abs() <= 1e-9 * v, "b = {b}, psi = {psi}: {v} vs {t}");
            }
        }
    }

    #[test]
    fn small_psi_goes_to_zero() {
        for b in [0.5, 3.0] {
            let y = y_value(1.0, 1e-8, b, &tol()).unwrap();
            assert!(y > 0.0 && y < 2e-8);
        }
    }

    #[test]
    fn reference_value_c2_psi1_b3() {
        // 30-digit value of the defining ratio
        let want = 0.256_720_180_469_139_47;
        let y = y_value(2.0, 1.0, 3.0, &tol()).unwrap();
        assert!((y - want).abs() < 1e-14, "{y}");
    }

    #[test]
    fn routes_agree() {
        for b in [0.3, 0.5, 1.5, 3.0, 7.0] {
            for psi in [1e-4, 0.01, 0.5, 3.0, 40.0, 230.0] {
                for c in [0.0, 0.3, 1.0, 7.0, 64.5, 1e3] {
                    let v = y_value(c, psi, b, &tol()).unwrap();
                    let t = y_value_t_form(c, psi, b, &tol()).unwrap();
                    assert!((v - t).abs() <= 1e-9 * v, "b = {b}, psi = {psi}, c = {c}: {v} vs {t}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(y_value(-1.0, 1.0, 1.0, &tol()).is_err());
        assert!(y_value(1.0, 0.0, 1.0, &tol()).is_err());
        assert!(y_value_t_form(1.0, 1.0, 0.0, &tol()).is_err());
    }
}
