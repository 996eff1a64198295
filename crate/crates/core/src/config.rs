use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tolerance, step size and truncation cap used by the solvers and
/// checks, gathered in one record so a report can snapshot it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Target for |I(q; a, b) - p|.
    pub quantile_abs_tol: f64,
    pub max_newton_iters: usize,
    /// Finite-difference step relative to `a`.
    pub fd_rel_step: f64,
    /// Relative accuracy demanded from series evaluations.
    pub series_tail_tol: f64,
    pub series_max_terms: usize,
    /// Number of explicit paired terms of the derivative series before the
    /// remainder is evaluated in closed integral form.
    pub series_direct_terms: usize,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            quantile_abs_tol: 1e-13,
            max_newton_iters: 100,
            fd_rel_step: 1e-4,
            series_tail_tol: 1e-12,
            series_max_terms: 200_000,
            series_direct_terms: 64,
            quad_abs_tol: 1e-10,
            quad_rel_tol: 1e-13,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quantile_abs_tol", self.quantile_abs_tol),
            ("fd_rel_step", self.fd_rel_step),
            ("series_tail_tol", self.series_tail_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("quad_rel_tol", self.quad_rel_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_newton_iters < 10 {
            return Err(Error::domain("max_newton_iters must be at least 10"));
        }
        if self.series_direct_terms == 0 || self.series_direct_terms > self.series_max_terms {
            return Err(Error::domain(
                "series_direct_terms must lie in 1..=series_max_terms",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let t = ToleranceConfig::default();
        t.validate().unwrap();
        assert_eq!(t.quantile_abs_tol, 1e-13);
        assert_eq!(t.max_newton_iters, 100);
        assert_eq!(t.series_max_terms, 200_000);
    }

    #[test]
    fn rejects_bad_values() {
        let mut t = ToleranceConfig::default();
        t.max_newton_iters = 5;
        assert!(t.validate().is_err());
        let mut t = ToleranceConfig::default();
        t.fd_rel_step = 0.0;
        assert!(t.validate().is_err());
        let mut t = ToleranceConfig::default();
        t.quantile_abs_tol = f64::NAN;
        assert!(t.validate().is_err());
    }
}
