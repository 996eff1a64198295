//! Inverse of the incomplete beta function in its first argument, solved in
//! the variable psi = -ln q.

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::incbeta::{inc_beta_at, log_beta_unchecked, BetaParams, BetaPoint};

/// Solution of I(q; a, b) = p.
///
/// `q` may underflow to zero for very small `a`; `psi` and `one_minus_q`
/// always carry the full value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileResult {
    pub q: f64,
    pub psi: f64,
    pub one_minus_q: f64,
    /// |I(q; a, b) - p| evaluated at q = exp(-psi).
    pub residual: f64,
    pub iterations: usize,
    /// Width of the final bracket, measured in q.
    pub bracket_width: f64,
}

const PSI_MIN: f64 = 1e-300;
const PSI_MAX: f64 = 1e300;

struct Problem {
    a: f64,
    b: f64,
    p: f64,
    ln_beta: f64,
}

impl Problem {
    /// g(psi) = I(exp(-psi)) - p, decreasing in psi.
    fn g(&self, psi: f64) -> Result<f64> {
        Ok(inc_beta_at(&BetaPoint::from_psi(psi), self.a, self.b)? - self.p)
    }

    /// dg/dpsi.
    fn slope(&self, psi: f64) -> f64 {
        let pt = BetaPoint::from_psi(psi);
        -(self.a * pt.ln_x + (self.b - 1.0) * pt.ln_y - self.ln_beta).exp()
    }
}

fn width_in_q(lo: f64, hi: f64) -> f64 {
    ((-lo).exp_m1() - (-hi).exp_m1()).abs()
}

fn bracket_failure(iterations: usize, lo: f64, hi: f64) -> Error {
    Error::Convergence {
        what: "beta quantile",
        iterations,
        lo: (-hi).exp(),
        hi: (-lo).exp(),
    }
}

struct Bracket {
    lo: f64,
    hi: f64,
    g_lo: f64,
    g_hi: f64,
}

/// Find psi_lo < psi_hi with g(psi_lo) > 0 > g(psi_hi). Returns an exact
/// root instead when one is hit.
fn bracket(prob: &Problem) -> Result<std::result::Result<Bracket, f64>> {
    // x^a / (a B) bounds I from above when b >= 1 and from below when b <= 1
    let bound = -(prob.p.ln() + prob.a.ln() + prob.ln_beta) / prob.a;
    let guess = (prob.b / prob.a).ln_1p();
    let (mut lo, mut hi) = if bound.is_finite() && bound > PSI_MIN {
        if prob.b >= 1.0 {
            (bound.min(guess) * 0.5, bound)
        } else {
            (bound, bound.max(guess) * 2.0)
        }
    } else {
        (guess * 0.5, guess * 2.0)
    };
    let mut g_hi = prob.g(hi)?;
    while g_hi > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > PSI_MAX {
            return Err(bracket_failure(0, lo, hi));
        }
        g_hi = prob.g(hi)?;
    }
    if g_hi == 0.0 {
        return Ok(Err(hi));
    }
    let mut g_lo = prob.g(lo)?;
    while g_lo < 0.0 {
        (hi, g_hi) = (lo, g_lo);
        lo *= 0.5;
        if lo < PSI_MIN {
            return Err(bracket_failure(0, lo, hi));
        }
        g_lo = prob.g(lo)?;
    }
    if g_lo == 0.0 {
        return Ok(Err(lo));
    }
    Ok(Ok(Bracket { lo, hi, g_lo, g_hi }))
}

fn finish(prob: &Problem, psi: f64, iterations: usize, width: f64) -> Result<QuantileResult> {
    let residual = prob.g(psi)?.abs();
    Ok(QuantileResult {
        q: (-psi).exp(),
        psi,
        one_minus_q: -(-psi).exp_m1(),
        residual,
        iterations,
        bracket_width: width,
    })
}

/// The p-quantile of the beta distribution with shapes (a, b).
pub fn quantile(params: BetaParams, tol: &ToleranceConfig) -> Result<QuantileResult> {
    tol.validate()?;
    let prob = Problem {
        a: params.a(),
        b: params.b(),
        p: params.p(),
        ln_beta: log_beta_unchecked(params.a(), params.b()),
    };

    let guess = (prob.b / prob.a).ln_1p();
    if guess > 0.0 && prob.g(guess)? == 0.0 {
        return finish(&prob, guess, 0, 0.0);
    }
    let br = match bracket(&prob)? {
        Ok(br) => br,
        Err(root) => return finish(&prob, root, 0, 0.0),
    };
    let (mut lo, mut hi) = (br.lo, br.hi);
    let (mut g_lo, mut g_hi) = (br.g_lo, br.g_hi);
    let mut fallbacks = 0;

    // The analytic bound can sit on the root itself (b = 1), and Newton
    // approaching it from the far side overshoots by rounding every time.
    let mut psi = if guess > lo && guess < hi {
        guess
    } else if br.g_lo.abs() <= br.g_hi.abs() {
        lo
    } else {
        hi
    };
    // g is only accurate to a few ulps near the root, so the last iterate is
    // not necessarily the best one
    let mut best = (psi, f64::INFINITY);
    let give_up = |iter: usize, best: (f64, f64), lo: f64, hi: f64| {
        let out = finish(&prob, best.0, iter, width_in_q(lo, hi))?;
        if out.residual <= tol.quantile_abs_tol {
            Ok(out)
        } else {
            Err(bracket_failure(iter, lo, hi))
        }
    };
    for iter in 1..=tol.max_newton_iters {
        let g = prob.g(psi)?;
        if g == 0.0 {
            return finish(&prob, psi, iter, 0.0);
        }
        if g.abs() < best.1 {
            best = (psi, g.abs());
        }
        if g > 0.0 {
            (lo, g_lo) = (psi, g);
        } else {
            (hi, g_hi) = (psi, g);
        }
        let slope = prob.slope(psi);
        let newton = psi - g / slope;
        if slope < 0.0 && (newton - psi).abs() <= 2.0 * f64::EPSILON * psi && g.abs() <= tol.quantile_abs_tol {
            // the correction is below the resolution of psi
            return finish(&prob, psi, iter, width_in_q(lo, hi));
        }
        let secant = lo + (hi - lo) * g_lo / (g_lo - g_hi);
        let next = if slope < 0.0 && newton > lo && newton < hi {
            fallbacks = 0;
            newton
        } else if fallbacks == 0
            && secant >= lo
            && secant <= hi
            && hi <= 4.0 * lo
            && (secant - psi).abs() > 2.0 * f64::EPSILON * psi
        {
            // an endpoint may already be the root; the secant finds it
            fallbacks += 1;
            secant
        } else {
            fallbacks = 0;
            if hi > 4.0 * lo {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            }
        };
        let step = (next - psi).abs();
        psi = next;
        if step <= 2.0 * f64::EPSILON * psi || hi - lo <= 2.0 * f64::EPSILON * psi {
            let g = prob.g(psi)?.abs();
            if g < best.1 {
                best = (psi, g);
            }
            return give_up(iter, best, lo, hi);
        }
    }
    give_up(tol.max_newton_iters, best, lo, hi)
}

fn params_of(a: f64, b: f64, p: f64) -> Result<BetaParams> {
    BetaParams::new(a, b, p)
}

/// phi(a) = -a ln q(a).
pub fn phi(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<f64> {
    Ok(a * quantile(params_of(a, b, p)?, tol)?.psi)
}

/// psi(a) = -ln q(a).
pub fn psi(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<f64> {
    Ok(quantile(params_of(a, b, p)?, tol)?.psi)
}

/// The same quantile as [`quantile`], obtained as 1 - q_{1-p}(b, a).
pub fn quantile_wrt_b(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<QuantileResult> {
    let params = params_of(a, b, p)?;
    let r = quantile(params.swapped(), tol)?;
    Ok(QuantileResult {
        q: r.one_minus_q,
        psi: -r.one_minus_q.ln(),
        one_minus_q: r.q,
        residual: r.residual,
        iterations: r.iterations,
        bracket_width: r.bracket_width,
    })
}

/// e^{-s} (1 - e^{-s/a})^{b-1}, the density of the variable -a ln X for
/// X ~ Beta(a, b), up to normalisation.
pub fn exp_form_density(a: f64, b: f64, s: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("shapes must be positive, got ({a}, {b})")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("s must be positive, got {s}")));
    }
    Ok(log_exp_form_density(a, b, s).exp())
}

pub(crate) fn log_exp_form_density(a: f64, b: f64, s: f64) -> f64 {
    if b == 1.0 {
        return -s;
    }
    -s + (b - 1.0) * (-(-s / a).exp_m1()).ln()
}
