//! The two binomial-sum identities with coefficients
//! c_k = C(b-1, k) (-1)^k = (1-b)_k / k!.

use super::ycurve::series_quad_tol;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gammafns::{ln_abs_gamma_signed, ln_gamma_ratio};
use crate::quad::{integrate, QuadTol};

fn check(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("b must be positive, got {b}")))
    }
}

fn as_integer(b: f64) -> Option<usize> {
    if b == b.round() && b <= 1e6 {
        Some(b as usize)
    } else {
        None
    }
}

/// c_0 .. c_{len-1} by the recurrence c_{k+1} = c_k (k + 1 - b) / (k + 1).
fn coefficients(b: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        out.push(c);
        c *= (k as f64 + 1.0 - b) / (k as f64 + 1.0);
    }
    out
}

/// Smooth continuation of c_k to real k > b - 1 for non-integer b:
/// Gamma(k + 1 - b) / (Gamma(1 - b) Gamma(k + 1)).
struct Continuation {
    b: f64,
    ln_abs: f64,
    sign: f64,
}

impl Continuation {
    fn new(b: f64) -> Result<Self> {
        let (ln_abs, sign) = ln_abs_gamma_signed(1.0 - b)?;
        Ok(Continuation { b, ln_abs, sign })
    }

    fn at(&self, k: f64) -> f64 {
        self.sign * (ln_gamma_ratio(k + 1.0, -self.b) - self.ln_abs).exp()
    }
}

/// sum_{k >= n} f(k) for a smooth, eventually power-decaying f, by
/// Euler-Maclaurin: the integral from n plus endpoint corrections.
/// `decay` is the power of k in the decay of f(k) k.
pub(crate) fn em_tail<F: Fn(f64) -> f64>(f: F, n: f64, decay: f64, qt: QuadTol) -> Result<f64> {
    let span = 40.0 / decay;
    let integral = integrate(
        |u: f64| {
            let k = n * u.exp();
            f(k) * k
        },
        0.0,
        span,
        qt,
    )?
    .value;
    let (m2, m1, p1, p2) = (f(n - 2.0), f(n - 1.0), f(n + 1.0), f(n + 2.0));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / 2.0;
    Ok(integral + 0.5 * f(n) - d1 / 12.0 + d3 / 720.0)
}

const DIRECT_TERMS: usize = 1000;

/// (-1)^m prod_{j=1..m, j != skip} (skip - j) / m!, the limit of
/// c_m / (skip - j) style quotients at integer b = skip.
fn removable(m: usize, skip: usize) -> f64 {
    let mut v = if m % 2 == 0 { 1.0 } else { -1.0 };
    for j in 1..=m {
        if j != skip {
            v *= (skip as f64 - j as f64) / j as f64;
        } else {
            v /= j as f64;
        }
    }
    v
}

/// |sum_{k>=0} c_k / (n + b - k)|, which vanishes.
///
/// For integer b the term k = n + b is 0/0 and enters through its limit.
pub fn sum1_check(n: usize, b: f64, tol: &ToleranceConfig) -> Result<f64> {
    check(b)?;
    let nf = n as f64;
    if let Some(bi) = as_integer(b) {
        let c = coefficients(b, bi);
        let finite: f64 = c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck / (nf + b - k as f64))
            .sum();
        return Ok((finite + removable(n + bi, bi)).abs());
    }
    let len = DIRECT_TERMS + n;
    let c = coefficients(b, len);
    let direct: f64 = c
        .iter()
        .enumerate()
        .map(|(k, ck)| ck / (nf + b - k as f64))
        .sum();
    let cont = Continuation::new(b)?;
    let tail = em_tail(
        |k| cont.at(k) / (nf + b - k),
        len as f64,
        b,
        series_quad_tol(tol),
    )?;
    Ok((direct + tail).abs())
}

/// sum_{k != n} (1/(k - n) - 1/(k + b - n)) for non-integer b.
fn inner_sum(n: usize, b: f64, tol: &ToleranceConfig) -> Result<f64> {
    let nf = n as f64;
    let len = DIRECT_TERMS + n;
    let mut direct = 0.0;
    for k in 0..len {
        if k == n {
            continue;
        }
        let d = k as f64 - nf;
        direct += 1.0 / d - 1.0 / (d + b);
    }
    let tail = em_tail(
        |k| {
            let d = k - nf;
            b / (d * (d + b))
        },
        len as f64,
        1.0,
        series_quad_tol(tol),
    )?;
    Ok(direct + tail)
}

/// |LHS - RHS| of
/// sum_{k != n} c_k / (k - n) = -c_n (sum_{k != n} (1/(k-n) - 1/(k+b-n)) - 1/b).
pub fn sum2_check(n: usize, b: f64, tol: &ToleranceConfig) -> Result<f64> {
    check(b)?;
    let nf = n as f64;
    if let Some(bi) = as_integer(b) {
        let c = coefficients(b, bi);
        let lhs: f64 = c
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != n)
            .map(|(k, ck)| ck / (k as f64 - nf))
            .sum();
        let rhs = if n < bi {
            // the inner sum telescopes to H_b + sum_{j=-n}^{-1} (1/j - 1/(j+b))
            let harmonic: f64 = (1..=bi).map(|j| 1.0 / j as f64).sum();
            let negative: f64 = (1..=n)
                .map(|j| -1.0 / j as f64 - 1.0 / (b - j as f64))
                .sum();
            -c[n] * (harmonic + negative - 1.0 / b)
        } else {
            // c_n vanishes while psi(b - n) has a pole; the product has this limit
            removable(n, bi)
        };
        return Ok((lhs - rhs).abs());
    }
    let len = DIRECT_TERMS + n;
    let c = coefficients(b, len);
    let mut lhs = 0.0;
    for (k, ck) in c.iter().enumerate() {
        if k != n {
            lhs += ck / (k as f64 - nf);
        }
    }
    let cont = Continuation::new(b)?;
    lhs += em_tail(|k| cont.at(k) / (k - nf), len as f64, b, series_quad_tol(tol))?;
    let rhs = -c[n] * (inner_sum(n, b, tol)? - 1.0 / b);
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammafns::digamma;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn coefficients_match_binomials() {
        // C(1.5, k)(-1)^k: 1, -1.5, 0.375, 0.0625
        let c = coefficients(2.5, 4);
        let want = [1.0, -1.5, 0.375, 0.0625];
        for (x, y) in c.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        let cont = Continuation::new(2.5).unwrap();
        let c = coefficients(2.5, 40);
        assert!((cont.at(39.0) - c[39]).abs() < 1e-13 * c[39].abs());
    }

    #[test]
    fn em_tail_on_zeta() {
        // sum_{k>=100} k^{-2} = zeta(2) - H_99^{(2)}
        let h: f64 = (1..100).rev().map(|k| 1.0 / (k * k) as f64).sum();
        let want = std::f64::consts::PI.powi(2) / 6.0 - h;
        let got = em_tail(|k| 1.0 / (k * k), 100.0, 1.0, QuadTol::new(0.0, 1e-14)).unwrap();
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn sum1_vanishes() {
        for n in [0, 1, 2, 5] {
            for b in [0.5, 0.7, 1.5, 2.5] {
                let r = sum1_check(n, b, &tol()).unwrap();
                assert!(r <= 1e-8, "n = {n}, b = {b}: {r}");
            }
        }
    }

    #[test]
    fn sum1_integer_b_is_exact() {
        for n in [0, 1, 2, 5] {
            for b in [1.0, 2.0, 3.0, 7.0] {
                assert!(sum1_check(n, b, &tol()).unwrap() <= 1e-12, "n = {n}, b = {b}");
            }
        }
    }

    #[test]
    fn sum2_holds() {
        for n in [0, 1, 2, 5] {
            for b in [0.5, 0.7, 1.5, 2.5] {
                let r = sum2_check(n, b, &tol()).unwrap();
                assert!(r <= 1e-7, "n = {n}, b = {b}: {r}");
            }
        }
    }

    #[test]
    fn sum2_integer_b_is_exact() {
        for n in [0, 1, 2, 5] {
            for b in [1.0, 2.0, 3.0, 7.0] {
                assert!(sum2_check(n, b, &tol()).unwrap() <= 1e-12, "n = {n}, b = {b}");
            }
        }
    }

    #[test]
    fn inner_sum_against_digamma() {
        for n in [0, 1, 2, 5] {
            for b in [0.5, 0.7, 1.5, 2.5] {
                let s = inner_sum(n, b, &tol()).unwrap();
                let want = digamma(b - n as f64).unwrap() - digamma(n as f64 + 1.0).unwrap() + 1.0 / b;
                assert!((s - want).abs() < 1e-11, "n = {n}, b = {b}: {s} vs {want}");
            }
        }
    }
}
