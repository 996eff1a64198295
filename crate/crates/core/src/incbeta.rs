//! Regularized incomplete beta function I(x; a, b).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gammafns::{ln_gamma_unchecked, stirling_correction, LN_SQRT_2PI};

/// Shape parameters `a`, `b` and a probability level `p` in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    a: f64,
    b: f64,
    p: f64,
}

fn check_shape(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be a finite positive number, got {v}")))
    }
}

impl BetaParams {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        check_shape("a", a)?;
        check_shape("b", b)?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
        }
        Ok(BetaParams { a, b, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same `b` and `p` with a different first shape.
    pub fn with_a(&self, a: f64) -> Result<Self> {
        BetaParams::new(a, self.b, self.p)
    }

    /// Parameters of the mirrored problem: (b, a, 1 - p).
    pub fn swapped(&self) -> Self {
        BetaParams {
            a: self.b,
            b: self.a,
            p: 1.0 - self.p,
        }
    }
}

/// ln B(a, b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    check_shape("a", a)?;
    check_shape("b", b)?;
    Ok(log_beta_unchecked(a, b))
}

pub(crate) fn log_beta_unchecked(a: f64, b: f64) -> f64 {
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    let total = small + large;
    if small >= 10.0 {
        let corr = stirling_correction(small) + stirling_correction(large)
            - stirling_correction(total);
        -0.5 * large.ln() + LN_SQRT_2PI + corr + (small - 0.5) * (small / total).ln()
            + large * (-small / total).ln_1p()
    } else if large >= 10.0 {
        let corr = stirling_correction(large) - stirling_correction(total);
        ln_gamma_unchecked(small) + corr + small - small * total.ln()
            + (large - 0.5) * (-small / total).ln_1p()
    } else {
        ln_gamma_unchecked(small) + ln_gamma_unchecked(large) - ln_gamma_unchecked(total)
    }
}

/// A point of [0, 1] carried together with its complement and both
/// logarithms, so that points extremely close to 0 or 1 keep full
/// relative accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BetaPoint {
    pub x: f64,
    pub y: f64,
    pub ln_x: f64,
    pub ln_y: f64,
}

impl BetaPoint {
    pub fn from_x(x: f64) -> Self {
        BetaPoint {
            x,
            y: 1.0 - x,
            ln_x: x.ln(),
            ln_y: (-x).ln_1p(),
        }
    }

    /// The point x = exp(-psi).
    pub fn from_psi(psi: f64) -> Self {
        let y = -(-psi).exp_m1();
        BetaPoint {
            x: (-psi).exp(),
            y,
            ln_x: -psi,
            ln_y: y.ln(),
        }
    }

    fn mirrored(&self) -> Self {
        BetaPoint {
            x: self.y,
            y: self.x,
            ln_x: self.ln_y,
            ln_y: self.ln_x,
        }
    }
}

const CF_MAX_ITER: usize = 500;
const CF_EPS: f64 = 2.2e-16;
const CF_TINY: f64 = 1e-300;

/// Continued fraction of the incomplete beta function, modified Lentz.
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        what: "incomplete beta continued fraction",
        iterations: CF_MAX_ITER,
        lo: x,
        hi: x,
    })
}

/// x^a y^b / (a B(a, b)) times the continued fraction, valid below the
/// crossover point.
fn lower_tail(pt: &BetaPoint, a: f64, b: f64, ln_beta: f64) -> Result<f64> {
    let front = (a * pt.ln_x + b * pt.ln_y - ln_beta).exp() / a;
    if front == 0.0 {
        return Ok(0.0);
    }
    Ok(front * beta_cf(pt.x, a, b)?)
}

/// I(x; a, b) at an interior or boundary point; parameters unchecked.
pub(crate) fn inc_beta_at(pt: &BetaPoint, a: f64, b: f64) -> Result<f64> {
    if pt.x <= 0.0 && pt.ln_x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if pt.y <= 0.0 {
        return Ok(1.0);
    }
    let ln_beta = log_beta_unchecked(a, b);
    let value = if pt.x < (a + 1.0) / (a + b + 2.0) {
        lower_tail(pt, a, b, ln_beta)?
    } else {
        1.0 - lower_tail(&pt.mirrored(), b, a, ln_beta)?
    };
    Ok(value.clamp(0.0, 1.0))
}

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("x must lie in [0, 1], got {x}")))
    }
}

/// Regularized incomplete beta function I(x; a, b).
pub fn reg_inc_beta(x: f64, params: BetaParams) -> Result<f64> {
    check_x(x)?;
    inc_beta_at(&BetaPoint::from_x(x), params.a, params.b)
}

/// 1 - I(1 - x; b, a), which equals I(x; a, b).
pub fn reflect(x: f64, params: BetaParams) -> Result<f64> {
    check_x(x)?;
    let mirrored = inc_beta_at(&BetaPoint::from_x(x).mirrored(), params.b, params.a)?;
    Ok(1.0 - mirrored)
}
