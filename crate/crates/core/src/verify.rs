//! Verification suites over the standard parameter grid.
//!
//! Grid checks produce one record per (b, p) sweep holding the worst value
//! over a, so a report stays readable while still listing every residual
//! that decides a verdict. Tolerances of the claims are fixed here and do
//! not follow the solver tolerances in [`ToleranceConfig`].

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gammafns::{gamma_quantile, reg_lower_gamma, GammaQuantileQuery};
use crate::incbeta::{reflect, reg_inc_beta, BetaParams};
use crate::qframework::{
    discrete_quantiles, quantile_convergence_check, quantile_monotonicity_check, ratio_monotonicity_check,
    CdfGrid, DiscretizedMeasure, FamilySpec, FrameworkInstance, GridOptions, WeightedGrid,
};
use crate::quantile::{quantile, quantile_wrt_b, QuantileResult};
use crate::report::{CheckRecord, VerificationReport};
use crate::series::{
    eta_eval, eta_integral_identity, find_rho, h0_eval, hyper1_check, psi_prime_at, q_prime_series, sum1_check,
    sum2_check, w_eval, y_value, y_value_t_form,
};
use crate::sweep::{spaced, Scale};

pub const STANDARD_B: [f64; 7] = [0.3, 0.5, 0.9, 1.0, 1.5, 3.0, 7.0];
pub const STANDARD_P: [f64; 3] = [0.1, 0.5, 0.9];

pub const RESIDUAL_TOL: f64 = 1e-13;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const ROUTE_TOL: f64 = 2e-13;
pub const INC_BETA_REFLECTION_TOL: f64 = 1e-13;
pub const LIMIT_Q_TOL: f64 = 1e-3;
pub const PHI_FLAT_TOL: f64 = 1e-10;
pub const PHI_LIMIT_TOL: f64 = 2e-2;
pub const GAMMA_ROUND_TRIP_TOL: f64 = 1e-12;
pub const PHI_CURVATURE_MARGIN: f64 = 1e-10;
pub const PSI_CURVATURE_FLOOR: f64 = -1e-8;
pub const SERIES_FD_TOL: f64 = 1e-4;
pub const SERIES_FD_TOL_INTERIOR: f64 = 1e-5;
pub const Q_PRIME_TOL: f64 = 1e-8;
pub const ETA_TOL: f64 = 1e-8;
pub const SUM1_TOL: f64 = 1e-8;
pub const SUM2_TOL: f64 = 1e-7;
pub const HYPER_TOL: f64 = 1e-9;
pub const Y_ORDER_TOL: f64 = 1e-10;
pub const Y_ROUTE_TOL: f64 = 1e-9;
pub const W_ROOT_TOL: f64 = 1e-12;
pub const FRAMEWORK_Q_TOL: f64 = 1e-3;
pub const FRAMEWORK_LIMIT_TOL: f64 = 2e-2;

/// a range where the curvature margin and the tighter series tolerance apply.
pub const WELL_CONDITIONED_A: (f64, f64) = (0.1, 100.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Monotonicity,
    Convexity,
    Logconcavity,
    Framework,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [
        Suite::Identities,
        Suite::Monotonicity,
        Suite::Convexity,
        Suite::Logconcavity,
        Suite::Framework,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Monotonicity => "monotonicity",
            Suite::Convexity => "convexity",
            Suite::Logconcavity => "logconcavity",
            Suite::Framework => "framework",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::domain(format!("unknown suite {s:?}")))
    }
}

/// Parameter grid shared by all suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub b: Vec<f64>,
    pub p: Vec<f64>,
    pub a: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            b: STANDARD_B.to_vec(),
            p: STANDARD_P.to_vec(),
            a: spaced(1e-2, 1e3, 60, Scale::Log),
        }
    }
}

impl Grid {
    fn pairs(&self) -> Vec<(f64, f64)> {
        self.b
            .iter()
            .flat_map(|&b| self.p.iter().map(move |&p| (b, p)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: ToleranceConfig,
    pub grid: Grid,
    /// Extra quantile monotonicity claims run by the framework suite.
    pub instances: Vec<FrameworkInstance>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tolerances: ToleranceConfig::default(),
            grid: Grid::default(),
            instances: Vec::new(),
        }
    }
}

/// Run one suite, or all of them in order.
pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.tolerances.validate()?;
    let tol = &opts.tolerances;
    let checks = match suite {
        Suite::Identities => identities(opts)?,
        Suite::Monotonicity => monotonicity(opts)?,
        Suite::Convexity => convexity(opts)?,
        Suite::Logconcavity => logconcavity(opts)?,
        Suite::Framework => framework(opts)?,
        Suite::All => {
            let parts = Suite::PARTS
                .iter()
                .map(|&s| run(s, opts))
                .collect::<Result<Vec<_>>>()?;
            return Ok(VerificationReport::merge("all", parts, *tol));
        }
    };
    Ok(VerificationReport::new(suite.name(), checks, *tol))
}

/// Quantiles at a - h, a, a + h with h = fd_rel_step * a.
#[derive(Debug, Clone, Copy)]
struct Stencil {
    a: f64,
    h: f64,
    lo: QuantileResult,
    mid: QuantileResult,
    hi: QuantileResult,
}

impl Stencil {
    fn new(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<Self> {
        let h = tol.fd_rel_step * a;
        let solve = |x: f64| quantile(BetaParams::new(x, b, p)?, tol);
        Ok(Stencil {
            a,
            h,
            lo: solve(a - h)?,
            mid: solve(a)?,
            hi: solve(a + h)?,
        })
    }

    fn psi_d1(&self) -> f64 {
        (self.hi.psi - self.lo.psi) / (2.0 * self.h)
    }

    fn psi_d2(&self) -> f64 {
        (self.hi.psi - 2.0 * self.mid.psi + self.lo.psi) / (self.h * self.h)
    }

    fn phi_d2(&self) -> f64 {
        let (a, h) = (self.a, self.h);
        ((a + h) * self.hi.psi - 2.0 * a * self.mid.psi + (a - h) * self.lo.psi) / (h * h)
    }
}

fn stencils(grid: &[f64], b: f64, p: f64, tol: &ToleranceConfig) -> Result<Vec<Stencil>> {
    grid.par_iter().map(|&a| Stencil::new(a, b, p, tol)).collect()
}

fn solve(a: f64, b: f64, p: f64, tol: &ToleranceConfig) -> Result<QuantileResult> {
    quantile(BetaParams::new(a, b, p)?, tol)
}

/// Largest value of `f` over the grid together with its argument.
fn worst<T, F: Fn(&T) -> f64>(items: &[T], arg: impl Fn(&T) -> f64, f: F) -> (f64, f64) {
    items.iter().fold((f64::NEG_INFINITY, f64::NAN), |acc, it| {
        let v = f(it);
        if v > acc.0 || v.is_nan() && !acc.0.is_nan() {
            (v, arg(it))
        } else {
            acc
        }
    })
}

fn in_well_conditioned(a: f64) -> bool {
    a >= WELL_CONDITIONED_A.0 && a <= WELL_CONDITIONED_A.1
}

fn identities(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let tol = &opts.tolerances;
    let grid = &opts.grid;
    let mut out = Vec::new();

    struct Point {
        a: f64,
        residual: f64,
        route_gap: f64,
        series: f64,
        fd_gap: f64,
        hyper: f64,
    }
    let per_pair: Vec<((f64, f64), Vec<Point>)> = grid
        .pairs()
        .into_iter()
        .map(|(b, p)| {
            let pts = grid
                .a
                .par_iter()
                .map(|&a| {
                    let st = Stencil::new(a, b, p, tol)?;
                    let other = quantile_wrt_b(a, b, p, tol)?;
                    let (series, _) = psi_prime_at(a, b, st.mid.psi, tol)?;
                    let fd = st.psi_d1();
                    Ok(Point {
                        a,
                        residual: st.mid.residual,
                        route_gap: (st.mid.q - other.q).abs(),
                        series,
                        fd_gap: ((series - fd) / fd).abs(),
                        hyper: hyper1_check(a, b, p, tol)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(((b, p), pts))
        })
        .collect::<Result<_>>()?;

    for ((b, p), pts) in &per_pair {
        let (r, at) = worst(pts, |x| x.a, |x| x.residual);
        out.push(
            CheckRecord::bound("defining equation residual", r, RESIDUAL_TOL)
                .param("b", *b)
                .param("p", *p)
                .witness("a", at),
        );
    }
    for &p in &grid.p {
        let rows: Vec<(f64, f64)> = grid
            .a
            .par_iter()
            .map(|&a| Ok((a, (solve(a, 1.0, p, tol)?.q - p.powf(1.0 / a)).abs())))
            .collect::<Result<_>>()?;
        let (r, at) = worst(&rows, |x| x.0, |x| x.1);
        out.push(
            CheckRecord::bound("closed form at b = 1", r, CLOSED_FORM_TOL)
                .param("b", 1.0)
                .param("p", p)
                .witness("a", at),
        );
    }
    for ((b, p), pts) in &per_pair {
        let (r, at) = worst(pts, |x| x.a, |x| x.route_gap);
        out.push(
            CheckRecord::bound("reflected quantile route", r, ROUTE_TOL)
                .param("b", *b)
                .param("p", *p)
                .witness("a", at),
        );
    }
    out.push(inc_beta_reflection()?);

    for ((b, p), pts) in &per_pair {
        let (r, at) = worst(pts, |x| x.a, |x| x.fd_gap);
        out.push(
            CheckRecord::bound("derivative series vs finite difference", r, SERIES_FD_TOL)
                .param("b", *b)
                .param("p", *p)
                .witness("a", at),
        );
        let inner: Vec<&Point> = pts.iter().filter(|x| in_well_conditioned(x.a)).collect();
        let (r, at) = worst(&inner, |x| x.a, |x| x.fd_gap);
        out.push(
            CheckRecord::bound("derivative series vs finite difference, a in [0.1, 100]", r, SERIES_FD_TOL_INTERIOR)
                .param("b", *b)
                .param("p", *p)
                .witness("a", at),
        );
        let positive = pts.iter().filter(|x| !(x.series < 0.0)).count();
        let (s, at) = worst(pts, |x| x.a, |x| x.series);
        out.push(
            CheckRecord::violations("derivative series negative", positive)
                .param("b", *b)
                .param("p", *p)
                .witness("largest", s)
                .witness("a", at),
        );
    }
    out.extend(q_prime_consistency(grid, tol)?);

    for b in [0.3, 0.5, 1.0, 2.0, 2.5, 3.0, 3.7, 5.0] {
        out.push(eta_record(b, tol)?);
    }
    for n in [0usize, 1, 2, 5] {
        for b in [0.5, 0.7, 1.5, 2.5] {
            out.push(
                CheckRecord::bound("binomial sum vanishes", sum1_check(n, b, tol)?, SUM1_TOL)
                    .param("n", n as f64)
                    .param("b", b),
            );
            out.push(
                CheckRecord::bound("binomial sum with digamma weights", sum2_check(n, b, tol)?, SUM2_TOL)
                    .param("n", n as f64)
                    .param("b", b),
            );
        }
    }
    for ((b, p), pts) in &per_pair {
        let (r, at) = worst(pts, |x| x.a, |x| x.hyper);
        out.push(
            CheckRecord::bound("hypergeometric form", r, HYPER_TOL)
                .param("b", *b)
                .param("p", *p)
                .witness("a", at),
        );
    }
    out.extend(y_routes(tol)?);
    Ok(out)
}

fn inc_beta_reflection() -> Result<CheckRecord> {
    let shapes = [0.3, 1.0, 2.0, 5.0, 20.0];
    let mut w = (0.0f64, f64::NAN, f64::NAN, f64::NAN);
    for &a in &shapes {
        for &b in &shapes {
            let params = BetaParams::new(a, b, 0.5)?;
            for i in 1..=99 {
                let x = i as f64 / 100.0;
                let gap = (reg_inc_beta(x, params)? - reflect(x, params)?).abs();
                if gap > w.0 {
                    w = (gap, x, a, b);
                }
            }
        }
    }
    Ok(CheckRecord::bound("incomplete beta reflection", w.0, INC_BETA_REFLECTION_TOL)
        .witness("x", w.1)
        .witness("a", w.2)
        .witness("b", w.3))
}

fn q_prime_consistency(grid: &Grid, tol: &ToleranceConfig) -> Result<Vec<CheckRecord>> {
    // every sixth point: the series is evaluated twice per point here
    let thin: Vec<f64> = grid.a.iter().step_by(6).copied().collect();
    grid.pairs()
        .into_iter()
        .map(|(b, p)| {
            let rows: Vec<(f64, f64)> = thin
                .par_iter()
                .map(|&a| {
                    let r = solve(a, b, p, tol)?;
                    let (d, _) = psi_prime_at(a, b, r.psi, tol)?;
                    let direct = q_prime_series(a, b, p, tol)?;
                    let via_psi = -r.q * d;
                    Ok((a, ((direct - via_psi) / via_psi).abs()))
                })
                .collect::<Result<_>>()?;
            let (r, at) = worst(&rows, |x| x.0, |x| x.1);
            Ok(CheckRecord::bound("q' series equals -q psi'", r, Q_PRIME_TOL)
                .param("b", b)
                .param("p", p)
                .witness("a", at))
        })
        .collect()
}

fn eta_record(b: f64, tol: &ToleranceConfig) -> Result<CheckRecord> {
    let direct = eta_integral_identity(b, tol)?;
    let mut rec = CheckRecord::bound("eta integral vanishes", direct.abs(), ETA_TOL).param("b", b);
    if b == 1.0 || b == 2.0 {
        let avg = 0.5 * (eta_integral_identity(b - 1e-4, tol)? + eta_integral_identity(b + 1e-4, tol)?);
        let r = direct.abs().max(avg.abs());
        rec = CheckRecord::bound("eta integral vanishes", r, ETA_TOL)
            .param("b", b)
            .witness("direct", direct)
            .witness("limit_average", avg);
    }
    Ok(rec)
}

/// psi values for the Y checks: 50 log-spaced points on [0.01, 5].
fn y_psi_grid() -> Vec<f64> {
    spaced(0.01, 5.0, 50, Scale::Log)
}

const Y_C: [f64; 3] = [0.5, 1.0, 4.0];

fn y_routes(tol: &ToleranceConfig) -> Result<Vec<CheckRecord>> {
    let psis = y_psi_grid();
    let mut out = Vec::new();
    for b in [0.3, 0.5, 1.5, 3.0, 7.0] {
        let rows: Vec<(f64, f64, f64)> = Y_C
            .iter()
            .flat_map(|&c| psis.iter().map(move |&s| (c, s)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(c, s)| {
                let v = y_value(c, s, b, tol)?;
                let t = y_value_t_form(c, s, b, tol)?;
                Ok((c, s, ((v - t) / v).abs()))
            })
            .collect::<Result<_>>()?;
        let w = rows
            .iter()
            .fold((0.0f64, f64::NAN, f64::NAN), |acc, r| if r.2 > acc.0 { (r.2, r.0, r.1) } else { acc });
        out.push(
            CheckRecord::bound("Y routes agree", w.0, Y_ROUTE_TOL)
                .param("b", b)
                .witness("c", w.1)
                .witness("psi", w.2),
        );
    }
    Ok(out)
}

fn monotonicity(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let tol = &opts.tolerances;
    let grid = &opts.grid;
    let mut out = Vec::new();
    for (b, p) in grid.pairs() {
        let rs: Vec<QuantileResult> = grid
            .a
            .par_iter()
            .map(|&a| solve(a, b, p, tol))
            .collect::<Result<_>>()?;
        let mut bad = 0;
        let mut first_bad = f64::NAN;
        for (i, w) in rs.windows(2).enumerate() {
            if !(w[1].q > w[0].q) {
                bad += 1;
                if first_bad.is_nan() {
                    first_bad = grid.a[i + 1];
                }
            }
        }
        out.push(
            CheckRecord::violations("quantile strictly increasing in a", bad)
                .param("b", b)
                .param("p", p)
                .witness("first_violation_a", first_bad),
        );

        let small = solve(1e-5, b, p, tol)?;
        let large = solve(1e5, b, p, tol)?;
        out.push(
            CheckRecord::bound("quantile limits in a", small.q.max(large.one_minus_q), LIMIT_Q_TOL)
                .param("b", b)
                .param("p", p)
                .witness("q_small_a", small.q)
                .witness("one_minus_q_large_a", large.one_minus_q),
        );

        let phis: Vec<f64> = grid.a.iter().zip(&rs).map(|(a, r)| a * r.psi).collect();
        let mut bad = 0;
        let mut worst_step = 0.0f64;
        for w in phis.windows(2) {
            let d = w[1] - w[0];
            let ok = if b > 1.0 {
                d > 0.0
            } else if b < 1.0 {
                d < 0.0
            } else {
                d.abs() <= PHI_FLAT_TOL
            };
            if !ok {
                bad += 1;
            }
            let against = if b > 1.0 {
                -d
            } else if b < 1.0 {
                d
            } else {
                d.abs()
            };
            worst_step = worst_step.max(against);
        }
        out.push(
            CheckRecord::violations("phi moves with the sign of b - 1", bad)
                .param("b", b)
                .param("p", p)
                .witness("worst_step", worst_step),
        );

        let phi_small = 1e-4 * solve(1e-4, b, p, tol)?.psi;
        out.push(
            CheckRecord::bound("phi limit as a -> 0", (phi_small + p.ln()).abs(), PHI_LIMIT_TOL)
                .param("b", b)
                .param("p", p)
                .witness("phi", phi_small)
                .witness("limit", -p.ln()),
        );
        let gamma_b = gamma_quantile(GammaQuantileQuery::new(b, 1.0 - p)?)?;
        let round_trip = (reg_lower_gamma(b, gamma_b)? - (1.0 - p)).abs();
        out.push(
            CheckRecord::bound("gamma quantile round trip", round_trip, GAMMA_ROUND_TRIP_TOL)
                .param("b", b)
                .param("p", p)
                .witness("gamma_quantile", gamma_b),
        );
        let phi_large = 1e4 * solve(1e4, b, p, tol)?.psi;
        out.push(
            CheckRecord::bound("phi limit as a -> inf", (phi_large - gamma_b).abs(), PHI_LIMIT_TOL)
                .param("b", b)
                .param("p", p)
                .witness("phi", phi_large)
                .witness("limit", gamma_b),
        );
    }
    out.extend(y_order(tol)?);
    Ok(out)
}

fn y_order(tol: &ToleranceConfig) -> Result<Vec<CheckRecord>> {
    let psis = y_psi_grid();
    let mut out = Vec::new();
    for b in [1.5, 3.0, 7.0] {
        let table: Vec<Vec<f64>> = Y_C
            .iter()
            .map(|&c| {
                psis.par_iter()
                    .map(|&s| y_value(c, s, b, tol))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut bad_psi = 0;
        for row in &table {
            bad_psi += row
                .windows(2)
                .filter(|w| w[1] < w[0] - Y_ORDER_TOL * w[0].abs())
                .count();
        }
        out.push(CheckRecord::violations("Y increasing in psi", bad_psi).param("b", b));
        let mut bad_c = 0;
        for pair in table.windows(2) {
            bad_c += pair[0]
                .iter()
                .zip(&pair[1])
                .filter(|(lo_c, hi_c)| **hi_c > **lo_c + Y_ORDER_TOL * lo_c.abs())
                .count();
        }
        out.push(CheckRecord::violations("Y decreasing in c", bad_c).param("b", b));
    }
    Ok(out)
}

fn interior(i: usize, n: usize) -> bool {
    i > 0 && i + 1 < n
}

fn convexity(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let tol = &opts.tolerances;
    let grid = &opts.grid;
    let n = grid.a.len();
    let mut out = Vec::new();
    for (b, p) in grid.pairs() {
        if b == 1.0 {
            continue;
        }
        let st = stencils(&grid.a, b, p, tol)?;
        let d2: Vec<f64> = st.iter().map(Stencil::phi_d2).collect();
        if b < 1.0 {
            let mut bad = 0;
            for (i, (&v, s)) in d2.iter().zip(&st).enumerate() {
                let needed = if in_well_conditioned(s.a) { PHI_CURVATURE_MARGIN } else { 0.0 };
                if interior(i, n) && !(v > needed) {
                    bad += 1;
                }
            }
            let (low, at) = worst(&st.iter().zip(&d2).collect::<Vec<_>>(), |x| x.0.a, |x| -x.1);
            let inner_min = st
                .iter()
                .zip(&d2)
                .filter(|(s, _)| in_well_conditioned(s.a))
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min);
            out.push(
                CheckRecord::violations("phi convex for b < 1", bad)
                    .param("b", b)
                    .param("p", p)
                    .witness("min_second_difference", -low)
                    .witness("a", at)
                    .witness("min_second_difference_a_in_0.1_100", inner_min),
            );
        } else {
            let concave = d2.iter().filter(|v| **v < 0.0).count();
            out.push(
                CheckRecord::info("phi concavity for b > 1 (open)", concave as f64 / n as f64)
                    .param("b", b)
                    .param("p", p)
                    .witness("points", n as f64)
                    .witness("concave_points", concave as f64)
                    .note("conjecture, recorded only: fraction of grid points with negative second difference"),
            );
        }
    }
    Ok(out)
}

fn logconcavity(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let tol = &opts.tolerances;
    let grid = &opts.grid;
    let n = grid.a.len();
    let mut out = Vec::new();
    for (b, p) in grid.pairs() {
        let st = stencils(&grid.a, b, p, tol)?;
        let d2: Vec<f64> = st.iter().map(Stencil::psi_d2).collect();
        let mut bad = 0;
        for (i, &v) in d2.iter().enumerate() {
            let below_floor = !(v >= PSI_CURVATURE_FLOOR);
            let not_strict = b != 1.0 && interior(i, n) && !(v > 0.0);
            if below_floor || not_strict {
                bad += 1;
            }
        }
        let (low, at) = worst(&st.iter().zip(&d2).collect::<Vec<_>>(), |x| x.0.a, |x| -x.1);
        out.push(
            CheckRecord::violations("psi convex in a", bad)
                .param("b", b)
                .param("p", p)
                .witness("min_second_difference", -low)
                .witness("a", at),
        );
    }

    for b in [1e-6, 0.5, 1.0, 3.0, 4.0] {
        out.push(rho_record(b));
    }
    for b in [0.5, 1.0, 3.0] {
        out.push(h0_record(b)?);
    }
    for b in [0.5, 3.0] {
        out.push(eta_sign_record(b)?);
    }
    Ok(out)
}

fn rho_record(b: f64) -> CheckRecord {
    match find_rho(b) {
        Ok(r) => {
            let w_rho = w_eval(r.rho, b).unwrap_or(f64::NAN);
            let before = w_eval(0.5 * r.rho, b).unwrap_or(f64::NAN);
            let after = w_eval(2.0 * r.rho, b).unwrap_or(f64::NAN);
            let pattern_ok = before > 0.0 && after < 0.0;
            let residual = if pattern_ok { w_rho.abs() } else { f64::INFINITY };
            CheckRecord::bound("root of w with sign change", residual, W_ROOT_TOL)
                .param("b", b)
                .witness("rho", r.rho)
                .witness("w_half_rho", before)
                .witness("w_twice_rho", after)
        }
        Err(e) => CheckRecord::bound("root of w with sign change", f64::INFINITY, W_ROOT_TOL)
            .param("b", b)
            .note(e.to_string()),
    }
}

fn h0_record(b: f64) -> Result<CheckRecord> {
    let rho = find_rho(b)?.rho;
    let xs: Vec<f64> = (1..=100).map(|i| rho * i as f64 / 101.0).collect();
    let vals = xs.iter().map(|&s| h0_eval(s, b)).collect::<Result<Vec<_>>>()?;
    let bad = vals.windows(2).filter(|w| !(w[1] < w[0])).count();
    Ok(CheckRecord::violations("h0 strictly decreasing before rho", bad)
        .param("b", b)
        .witness("rho", rho)
        .witness("h0_first", vals[0])
        .witness("h0_last", vals[vals.len() - 1]))
}

fn eta_sign_record(b: f64) -> Result<CheckRecord> {
    let rho = find_rho(b)?.rho;
    let xs: Vec<f64> = (1..=400).map(|i| 20.0 * i as f64 / 400.0).collect();
    let mut bad = 0;
    for &x in &xs {
        if (x - rho).abs() <= 1e-9 * rho {
            continue;
        }
        let w = w_eval(x, b)?;
        let e = eta_eval(x, b)?;
        if w.signum() != e.signum() {
            bad += 1;
        }
    }
    Ok(CheckRecord::violations("eta has the sign of w", bad)
        .param("b", b)
        .witness("rho", rho))
}

fn framework(opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let tol = &opts.tolerances;
    let grid = &opts.grid;
    let g = GridOptions::with_tolerances(*tol);
    let mut out = Vec::new();

    for (b, p) in grid.pairs() {
        let fam = FamilySpec::Beta { b };
        let disc = discrete_quantiles(&fam, p, &grid.a, &g)?;
        let rows: Vec<(f64, f64)> = grid
            .a
            .par_iter()
            .zip(disc.par_iter())
            .map(|(&a, &qd)| Ok((a, (solve(a, b, p, tol)?.q - qd).abs())))
            .collect::<Result<_>>()?;
        let (r, at) = worst(&rows, |x| x.0, |x| x.1);
        out.push(
            CheckRecord::bound("framework quantile matches solver", r, FRAMEWORK_Q_TOL)
                .param("b", b)
                .param("p", p)
                .witness("a", at),
        );
        out.extend(tagged(quantile_monotonicity_check(&fam, p, &grid.a, &g)?, "beta", b));
        let exp = FamilySpec::ExpForm { b };
        out.extend(tagged(
            quantile_monotonicity_check(&exp, 1.0 - p, &grid.a, &g)?,
            "exp_form",
            b,
        ));
        out.extend(exp_form_limits(b, p, &g)?);
    }

    let a_grid: Vec<f64> = spaced(0.25, 8.0, 12, Scale::Log);
    let beta = FamilySpec::Beta { b: 2.0 };
    let cut = |t: f64| if t <= 0.4 { 1.0 } else { 0.0 };
    out.extend(tagged(ratio_monotonicity_check(&beta, cut, |_| 1.0, &a_grid, &g)?, "beta indicator", 2.0));
    out.extend(tagged(ratio_monotonicity_check(&beta, |t| t, |t| t, &a_grid, &g)?, "beta equal weights", 2.0));
    out.extend(
        ratio_monotonicity_check(&FamilySpec::ExpTilt, |t| t, |_| 1.0, &a_grid, &g)?
            .checks
            .into_iter()
            .map(|c| c.note("family exp_tilt")),
    );

    let shift = FamilySpec::GaussianShift { sigma: 1.0 };
    let shifts: Vec<f64> = (-4..=4).map(|i| 0.5 * i as f64).collect();
    for level in [0.1, 0.5, 0.9] {
        let qs = discrete_quantiles(&shift, level, &shifts, &g)?;
        let base = qs[4];
        let gap = shifts
            .iter()
            .zip(&qs)
            .map(|(a, q)| (q - base - a).abs())
            .fold(0.0, f64::max);
        out.push(CheckRecord::bound("location family shifts its quantile", gap, FRAMEWORK_Q_TOL).param("level", level));
        out.extend(
            quantile_monotonicity_check(&shift, level, &shifts, &g)?
                .checks
                .into_iter()
                .map(|c| c.note("family gaussian_shift")),
        );
    }

    for inst in &opts.instances {
        inst.family.validate()?;
        let rep = quantile_monotonicity_check(&inst.family, inst.level, &inst.a_grid, &g)?;
        let label = serde_json::to_string(&inst.family).unwrap_or_default();
        out.extend(rep.checks.into_iter().map(|c| c.note(format!("family {label}"))));
    }
    Ok(out)
}

fn tagged(rep: VerificationReport, family: &str, b: f64) -> Vec<CheckRecord> {
    rep.checks
        .into_iter()
        .map(|c| c.param("b", b).note(format!("family {family}")))
        .collect()
}

fn exp_form_limits(b: f64, p: f64, g: &GridOptions) -> Result<Vec<CheckRecord>> {
    let fam = FamilySpec::ExpForm { b };
    let level = 1.0 - p;
    let cdfs = |avals: &[f64]| -> Result<Vec<CdfGrid>> {
        avals
            .iter()
            .map(|&a| Ok(WeightedGrid::for_family(&fam, a, g)?.cdf()))
            .collect()
    };
    let measure = DiscretizedMeasure::on_domain(0.0, f64::INFINITY, g.step)?;
    let exp_nodes = measure.weigh(|s| -s, g.truncation)?.nodes;
    let exp_limit = CdfGrid::from_fn(exp_nodes, |s| -(-s).exp_m1())?;
    let gamma_nodes = measure.weigh(|s| (b - 1.0) * s.ln() - s, g.truncation)?.nodes;
    let gamma_limit = CdfGrid::from_fn(gamma_nodes, |s| reg_lower_gamma(b, s).unwrap_or(f64::NAN))?;

    let small = cdfs(&[1e-1, 1e-2, 1e-3, 1e-4])?;
    let large = cdfs(&[1e1, 1e2, 1e3, 1e4])?;
    let to_zero = quantile_convergence_check(&small, &exp_limit, level, FRAMEWORK_LIMIT_TOL, g.tolerances);
    let to_inf = quantile_convergence_check(&large, &gamma_limit, level, FRAMEWORK_LIMIT_TOL, g.tolerances);
    let mut out = Vec::new();
    for (rep, side) in [(to_zero, "a -> 0"), (to_inf, "a -> inf")] {
        out.extend(rep.checks.into_iter().map(|c| {
            let name = format!("{} ({side})", c.name);
            CheckRecord { name, ..c }.param("b", b).param("p", p)
        }));
    }
    // the same endpoints against the closed-form limits rather than their
    // discretised distribution functions
    let gamma_b = gamma_quantile(GammaQuantileQuery::new(b, level)?)?;
    for (seq, target, side) in [(&small, -p.ln(), "a -> 0"), (&large, gamma_b, "a -> inf")] {
        let last = seq[seq.len() - 1].quantile(level).unwrap_or(f64::NAN);
        out.push(
            CheckRecord::bound(format!("exp form quantile reaches its limit ({side})"), (last - target).abs(), FRAMEWORK_LIMIT_TOL)
                .param("b", b)
                .param("p", p)
                .witness("quantile", last)
                .witness("limit", target),
        );
    }
    Ok(out)
}
