//! Parameter sweeps in a at fixed (b, p): the data behind plots of q, ln q
//! and phi against a.

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::incbeta::BetaParams;
use crate::quantile::quantile;
use crate::series::psi_prime_at;

pub const CSV_HEADER: &str = "a,q,log_q,phi,psi_prime_series,psi_second_fd";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub b: f64,
    pub p: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        BetaParams::new(self.a_min, self.b, self.p)?;
        BetaParams::new(self.a_max, self.b, self.p)?;
        if !(self.a_min < self.a_max) {
            return Err(Error::domain(format!(
                "a_min must be below a_max, got {} and {}",
                self.a_min, self.a_max
            )));
        }
        if self.points < 2 {
            return Err(Error::domain("a sweep needs at least two points"));
        }
        Ok(())
    }

    /// The a values of the sweep, endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        spaced(self.a_min, self.a_max, self.points, self.scale)
    }
}

pub(crate) fn spaced(lo: f64, hi: f64, n: usize, scale: Scale) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                return lo;
            }
            if i == n - 1 {
                return hi;
            }
            let t = i as f64 / last;
            match scale {
                Scale::Linear => lo + t * (hi - lo),
                Scale::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub q: f64,
    pub log_q: f64,
    pub phi: f64,
    pub psi_prime_series: f64,
    /// Central second difference of psi with step `fd_rel_step * a`.
    pub psi_second_fd: f64,
}

fn row(a: f64, spec: &SweepSpec, tol: &ToleranceConfig) -> Result<SweepRow> {
    let solve = |x: f64| quantile(BetaParams::new(x, spec.b, spec.p)?, tol);
    let mid = solve(a)?;
    let h = tol.fd_rel_step * a;
    let lo = solve(a - h)?;
    let hi = solve(a + h)?;
    let (d1, _) = psi_prime_at(a, spec.b, mid.psi, tol)?;
    Ok(SweepRow {
        a,
        q: mid.q,
        log_q: -mid.psi,
        phi: a * mid.psi,
        psi_prime_series: d1,
        psi_second_fd: (hi.psi - 2.0 * mid.psi + lo.psi) / (h * h),
    })
}

/// Evaluate every row of the sweep; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec, tol: &ToleranceConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    tol.validate()?;
    spec.grid().par_iter().map(|&a| row(a, spec, tol)).collect()
}

/// Rows as CSV: 17 significant digits, `\n` line endings.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(CSV_HEADER.len() + 1 + rows.len() * 150);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cols = [r.a, r.q, r.log_q, r.phi, r.psi_prime_series, r.psi_second_fd];
        for (i, v) in cols.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            // writing into a String cannot fail
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], mut w: W) -> io::Result<()> {
    w.write_all(to_csv(rows).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(b: f64, scale: Scale) -> SweepSpec {
        SweepSpec {
            b,
            p: 0.5,
            a_min: 0.1,
            a_max: 10.0,
            points: 12,
            scale,
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        for scale in [Scale::Linear, Scale::Log] {
            let g = spec(2.0, scale).grid();
            assert_eq!(g.len(), 12);
            assert_eq!(g[0], 0.1);
            assert_eq!(g[11], 10.0);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        let g = spec(2.0, Scale::Log).grid();
        assert!((g[1] / g[0] - g[2] / g[1]).abs() < 1e-14);
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(2.0, Scale::Log);
        s.points = 1;
        assert!(s.validate().is_err());
        let mut s = spec(2.0, Scale::Log);
        s.a_min = 20.0;
        assert!(s.validate().is_err());
        let mut s = spec(2.0, Scale::Log);
        s.p = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn b_one_has_flat_phi() {
        let rows = run_sweep(&spec(1.0, Scale::Log), &ToleranceConfig::default()).unwrap();
        for r in &rows {
            assert!((r.phi - 2f64.ln()).abs() < 1e-13);
            let want = -2f64.ln() / (r.a * r.a);
            assert!((r.psi_prime_series - want).abs() < 1e-9 * want.abs());
        }
    }

    #[test]
    fn csv_layout() {
        let rows = run_sweep(&spec(2.0, Scale::Linear), &ToleranceConfig::default()).unwrap();
        let text = to_csv(&rows);
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), rows.len() + 2);
        assert_eq!(lines[lines.len() - 1], "");
        assert!(!text.contains('\r'));
        let first: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[1], rows[0].q);
        assert_eq!(first[5], rows[0].psi_second_fd);
    }
}
