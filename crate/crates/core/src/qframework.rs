//! Monotonicity and convergence of quantiles for one-parameter density
//! families, checked on discretised measures.
//!
//! Every family is integrated with a trapezoid rule in a mapped variable u
//! (tanh-sinh on finite intervals, exp-sinh on half lines, sinh-sinh on the
//! line), so endpoint singularities and infinite domains cost nothing
//! special. Weights are kept in log form because the Jacobian of the map
//! underflows long before the nodes reach the endpoints.

use std::f64::consts::{FRAC_PI_2, LN_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::quantile::log_exp_form_density;
use crate::report::{CheckRecord, Status, VerificationReport};

/// f(a, x) > 0 on an open interval, indexed by a real parameter a.
pub trait DensityFamily: Sync {
    /// Open interval carrying the density. Endpoints may be infinite.
    fn domain(&self) -> (f64, f64);

    /// ln f(a, x). Any additive term depending on a alone is allowed, since
    /// none of the checks see it.
    fn log_density(&self, a: f64, x: f64) -> f64;

    fn density(&self, a: f64, x: f64) -> f64 {
        self.log_density(a, x).exp()
    }

    /// d/da ln f(a, x) when a closed form is known. The default falls back
    /// to a central difference, see [`score`].
    fn log_deriv_a(&self, _a: f64, _x: f64) -> Option<f64> {
        None
    }
}

/// d/da ln f(a, x), by closed form when the family provides one and by a
/// central difference with step `rel_step * max(|a|, 1)` otherwise.
pub fn score<F: DensityFamily + ?Sized>(family: &F, a: f64, x: f64, rel_step: f64) -> f64 {
    if let Some(v) = family.log_deriv_a(a, x) {
        return v;
    }
    let h = rel_step * a.abs().max(1.0);
    (family.log_density(a + h, x) - family.log_density(a - h, x)) / (2.0 * h)
}

/// The built-in families, in a form that can be read from JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// t^(a-1) (1-t)^(b-1) on (0, 1).
    Beta { b: f64 },
    /// e^(-s) (1 - e^(-s/a))^(b-1) on (0, inf).
    ExpForm { b: f64 },
    /// e^(a t) on (0, 1).
    ExpTilt,
    /// Normal density centred at a.
    GaussianShift { sigma: f64 },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            FamilySpec::Beta { b } | FamilySpec::ExpForm { b } => ("b", b),
            FamilySpec::GaussianShift { sigma } => ("sigma", sigma),
            FamilySpec::ExpTilt => return Ok(()),
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("{name} must be positive, got {v}")))
        }
    }
}

impl DensityFamily for FamilySpec {
    fn domain(&self) -> (f64, f64) {
        match self {
            FamilySpec::Beta { .. } | FamilySpec::ExpTilt => (0.0, 1.0),
            FamilySpec::ExpForm { .. } => (0.0, f64::INFINITY),
            FamilySpec::GaussianShift { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn log_density(&self, a: f64, x: f64) -> f64 {
        match *self {
            FamilySpec::Beta { b } => (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p(),
            FamilySpec::ExpForm { b } => log_exp_form_density(a, b, x),
            FamilySpec::ExpTilt => a * x,
            FamilySpec::GaussianShift { sigma } => {
                let z = (x - a) / sigma;
                -0.5 * z * z
            }
        }
    }

    fn log_deriv_a(&self, a: f64, x: f64) -> Option<f64> {
        Some(match *self {
            FamilySpec::Beta { .. } => x.ln(),
            FamilySpec::ExpForm { b } => {
                let y = x / a;
                // y / expm1(y) -> 0 once expm1 overflows
                -(b - 1.0) / a * (y / y.exp_m1())
            }
            FamilySpec::ExpTilt => x,
            FamilySpec::GaussianShift { sigma } => (x - a) / (sigma * sigma),
        })
    }
}

/// One monotonicity claim of the framework, as read from a JSON file:
/// the `level`-quantile of `family` over `a_grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkInstance {
    pub family: FamilySpec,
    pub level: f64,
    pub a_grid: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    /// Step of the trapezoid rule in the mapped variable.
    pub step: f64,
    /// Relative tolerance for sign checks on consecutive differences.
    pub sign_tol: f64,
    /// Masses below this fraction of the largest are cut from the tails.
    pub truncation: f64,
    pub tolerances: ToleranceConfig,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            step: 1.0 / 256.0,
            sign_tol: 1e-12,
            truncation: 1e-16,
            tolerances: ToleranceConfig::default(),
        }
    }
}

impl GridOptions {
    pub fn with_tolerances(tolerances: ToleranceConfig) -> Self {
        GridOptions {
            tolerances,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("step", self.step), ("sign_tol", self.sign_tol), ("truncation", self.truncation)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        self.tolerances.validate()
    }
}

// Half-width of the u range. The tanh-sinh map reaches the smallest
// positive double near u = 6.1.
const U_MAX: f64 = 6.5;

#[derive(Debug, Clone, Copy)]
enum DomainMap {
    Finite { lo: f64, hi: f64 },
    Upper { lo: f64 },
    Lower { hi: f64 },
    Line,
}

impl DomainMap {
    fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain(format!("empty domain ({lo}, {hi})")));
        }
        Ok(match (lo.is_finite(), hi.is_finite()) {
            (true, true) => DomainMap::Finite { lo, hi },
            (true, false) => DomainMap::Upper { lo },
            (false, true) => DomainMap::Lower { hi },
            (false, false) => DomainMap::Line,
        })
    }

    /// (x, ln dx/du) at u.
    fn point(self, u: f64) -> (f64, f64) {
        let v = FRAC_PI_2 * u.sinh();
        let ln_outer = (FRAC_PI_2 * u.cosh()).ln();
        match self {
            DomainMap::Finite { lo, hi } => {
                let len = hi - lo;
                let e = (-2.0 * v.abs()).exp();
                let frac = e / (1.0 + e);
                let x = if v < 0.0 { lo + len * frac } else { hi - len * frac };
                let ln_sig = -2.0 * v.abs() - 2.0 * e.ln_1p();
                (x, len.ln() + LN_2 + ln_sig + ln_outer)
            }
            DomainMap::Upper { lo } => (lo + v.exp(), v + ln_outer),
            DomainMap::Lower { hi } => (hi - (-v).exp(), -v + ln_outer),
            DomainMap::Line => {
                let ln_cosh = v.abs() + (-2.0 * v.abs()).exp().ln_1p() - LN_2;
                (v.sinh(), ln_cosh + ln_outer)
            }
        }
    }
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Nodes with positive weights: a discretised measure on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedMeasure {
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

impl DiscretizedMeasure {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.len() < 2 {
            return Err(Error::domain("need at least two nodes, one weight per node"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::domain("weights must be positive and finite"));
        }
        let log_weights = weights.iter().map(|w| w.ln()).collect();
        Ok(DiscretizedMeasure { nodes, log_weights })
    }

    /// Trapezoid rule with step `step` in the mapped variable, restricted to
    /// nodes that are representable inside the open interval.
    pub fn on_domain(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::domain(format!("step must lie in (0, 1], got {step}")));
        }
        let map = DomainMap::new(lo, hi)?;
        let k_max = (U_MAX / step).ceil() as i64;
        let mut nodes: Vec<f64> = Vec::with_capacity(2 * k_max as usize + 1);
        let mut log_weights: Vec<f64> = Vec::with_capacity(nodes.capacity());
        for k in -k_max..=k_max {
            let (x, ln_jac) = map.point(k as f64 * step);
            let lw = ln_jac + step.ln();
            if !(x > lo && x < hi && x.is_finite() && lw.is_finite()) {
                continue;
            }
            // Near an endpoint several u may round to one x; pool their mass.
            match nodes.last() {
                Some(&prev) if x <= prev => {
                    let last = log_weights.len() - 1;
                    log_weights[last] = log_add(log_weights[last], lw);
                }
                _ => {
                    nodes.push(x);
                    log_weights.push(lw);
                }
            }
        }
        if nodes.len() < 2 {
            return Err(Error::domain("domain too narrow for the requested step"));
        }
        Ok(DiscretizedMeasure { nodes, log_weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node masses f(x_i) w_i for the density with log `log_f`, scaled so the
    /// largest is 1, with the negligible tails cut off.
    pub fn weigh<L: Fn(f64) -> f64>(&self, log_f: L, truncation: f64) -> Result<WeightedGrid> {
        let lm: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.log_weights)
            .map(|(&x, &lw)| log_f(x) + lw)
            .collect();
        if lm.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::domain("density is not finite on the grid"));
        }
        let top = lm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::domain("density vanishes on the whole grid"));
        }
        let masses: Vec<f64> = lm.iter().map(|v| (v - top).exp()).collect();
        let keep = |m: &f64| *m >= truncation;
        let first = masses.iter().position(keep).unwrap_or(0);
        let last = masses.iter().rposition(keep).unwrap_or(masses.len() - 1);
        let total: f64 = masses.iter().sum();
        let kept: f64 = masses[first..=last].iter().sum();
        if last - first < 1 {
            return Err(Error::domain("density too concentrated for the grid"));
        }
        Ok(WeightedGrid {
            nodes: self.nodes[first..=last].to_vec(),
            masses: masses[first..=last].to_vec(),
            truncated_mass: (total - kept) / total,
        })
    }
}

/// Node masses of one density on a truncated grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGrid {
    pub nodes: Vec<f64>,
    pub masses: Vec<f64>,
    /// Fraction of the total mass removed from the tails.
    pub truncated_mass: f64,
}

impl WeightedGrid {
    pub fn for_family<F: DensityFamily + ?Sized>(family: &F, a: f64, opts: &GridOptions) -> Result<Self> {
        let (lo, hi) = family.domain();
        let measure = DiscretizedMeasure::on_domain(lo, hi, opts.step)?;
        measure.weigh(|x| family.log_density(a, x), opts.truncation)
    }

    /// Cumulative trapezoid of the masses, normalised to end at 1.
    pub fn cdf(&self) -> CdfGrid {
        let mut cdf = Vec::with_capacity(self.masses.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in self.masses.windows(2) {
            acc += 0.5 * (w[0] + w[1]);
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        CdfGrid {
            nodes: self.nodes.clone(),
            cdf,
        }
    }
}

/// A nondecreasing distribution function sampled on ascending nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfGrid {
    pub nodes: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl CdfGrid {
    pub fn new(nodes: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        if nodes.len() != cdf.len() || nodes.len() < 2 {
            return Err(Error::domain("need at least two nodes, one value per node"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("nodes must be strictly increasing"));
        }
        if cdf.windows(2).any(|w| !(w[0] <= w[1])) || cdf.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("distribution function must be finite and nondecreasing"));
        }
        Ok(CdfGrid { nodes, cdf })
    }

    pub fn from_fn<G: Fn(f64) -> f64>(nodes: Vec<f64>, f: G) -> Result<Self> {
        let cdf = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, cdf)
    }

    /// Level-`level` quantile by linear interpolation between the bracketing
    /// nodes; `None` when the level is not reached inside the grid.
    pub fn quantile(&self, level: f64) -> Option<f64> {
        let i = self.cdf.partition_point(|&c| c < level);
        if i == 0 || i == self.cdf.len() {
            return None;
        }
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        Some(x0 + (x1 - x0) * (level - c0) / (c1 - c0))
    }

    /// Grid enclosure of [sup{x : F(x) < level}, inf{x : F(x) > level}]:
    /// the last node below the level and the first node above it.
    pub fn level_bracket(&self, level: f64) -> Option<(f64, f64)> {
        let below = self.cdf.iter().rposition(|&c| c < level)?;
        let above = self.cdf.iter().position(|&c| c > level)?;
        Some((self.nodes[below], self.nodes[above]))
    }
}

/// Sign pattern of a sequence of consecutive differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

impl Trend {
    fn combine(self, other: Trend) -> Trend {
        use Trend::*;
        match (self, other) {
            (Constant, t) | (t, Constant) => t,
            (x, y) if x == y => x,
            _ => Mixed,
        }
    }

    fn code(self) -> f64 {
        match self {
            Trend::Increasing => 1.0,
            Trend::Decreasing => -1.0,
            Trend::Constant => 0.0,
            Trend::Mixed => f64::NAN,
        }
    }
}

/// Classify differences `d` measured against scales `s`: a difference counts
/// only when |d| > tol * s. `strict` means every difference counted.
fn classify<I: Iterator<Item = (f64, f64)>>(diffs: I, tol: f64) -> (Trend, bool) {
    let (mut up, mut down, mut strict) = (false, false, true);
    for (d, s) in diffs {
        if d.is_nan() {
            return (Trend::Mixed, false);
        }
        if d > tol * s {
            up = true;
        } else if d < -tol * s {
            down = true;
        } else {
            strict = false;
        }
    }
    let trend = match (up, down) {
        (true, true) => Trend::Mixed,
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (false, false) => Trend::Constant,
    };
    (trend, strict && trend != Trend::Constant)
}

/// Trend of a sequence of values, with relative tolerance `tol`.
pub fn trend_of(values: &[f64], tol: f64) -> (Trend, bool) {
    classify(
        values.windows(2).map(|w| (w[1] - w[0], w[0].abs().max(w[1].abs()))),
        tol,
    )
}

fn score_trend<F: DensityFamily + ?Sized>(family: &F, a: f64, nodes: &[f64], opts: &GridOptions) -> (Trend, bool) {
    let s: Vec<f64> = nodes
        .iter()
        .map(|&x| score(family, a, x, opts.tolerances.fd_rel_step))
        .collect();
    trend_of(&s, opts.sign_tol)
}

fn check_a_grid(a_grid: &[f64]) -> Result<()> {
    if a_grid.len() < 2 || a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("parameter grid needs two or more increasing values"));
    }
    Ok(())
}

fn direction_violations(values: &[f64], expected: Trend, tol: f64) -> (usize, f64) {
    let mut count = 0;
    let mut worst = 0.0f64;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let scale = tol * w[0].abs().max(w[1].abs());
        let bad = match expected {
            Trend::Increasing => (-d).max(0.0),
            Trend::Decreasing => d.max(0.0),
            _ => d.abs(),
        };
        if bad > scale || d.is_nan() {
            count += 1;
            worst = worst.max(bad);
        }
    }
    (count, worst)
}

fn hypothesis_record(name: &str, trend: Trend) -> CheckRecord {
    let status = if trend == Trend::Mixed {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    CheckRecord::with_status(name, 0.0, 0.0, status).witness("trend", trend.code())
}

/// F(a) = sum f(a, t) u(t) / sum f(a, t) v(t) over the discretised domain.
pub fn ratio_values<F, U, V>(family: &F, u: U, v: V, a_grid: &[f64], opts: &GridOptions) -> Result<Vec<f64>>
where
    F: DensityFamily + ?Sized,
    U: Fn(f64) -> f64 + Sync,
    V: Fn(f64) -> f64 + Sync,
{
    opts.validate()?;
    a_grid
        .par_iter()
        .map(|&a| {
            let g = WeightedGrid::for_family(family, a, opts)?;
            let (mut num, mut den) = (0.0, 0.0);
            for (&x, &m) in g.nodes.iter().zip(&g.masses) {
                num += m * u(x);
                den += m * v(x);
            }
            Ok(num / den)
        })
        .collect()
}

/// If the score d/da ln f and the ratio u/v are monotone in t, F(a) is
/// increasing when they move the same way and decreasing otherwise.
pub fn ratio_monotonicity_check<F, U, V>(
    family: &F,
    u: U,
    v: V,
    a_grid: &[f64],
    opts: &GridOptions,
) -> Result<VerificationReport>
where
    F: DensityFamily + ?Sized,
    U: Fn(f64) -> f64 + Sync,
    V: Fn(f64) -> f64 + Sync,
{
    opts.validate()?;
    check_a_grid(a_grid)?;
    let (lo, hi) = family.domain();
    let measure = DiscretizedMeasure::on_domain(lo, hi, opts.step)?;
    let uv: Vec<(f64, f64)> = measure.nodes().iter().map(|&t| (u(t), v(t))).collect();
    if uv.iter().any(|&(x, y)| !(x >= 0.0 && y >= 0.0) || (x == 0.0 && y == 0.0)) {
        return Err(Error::domain("u and v must be nonnegative and never both zero"));
    }
    // sign of u/v(t_{i+1}) - u/v(t_i), valid also where v vanishes
    let (ratio_trend, _) = classify(
        uv.windows(2).map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            (x1 * y0 - x0 * y1, (x1 * y0).abs().max((x0 * y1).abs()))
        }),
        opts.sign_tol,
    );

    let per_a: Vec<(Trend, bool)> = a_grid
        .par_iter()
        .map(|&a| {
            let g = WeightedGrid::for_family(family, a, opts)?;
            Ok(score_trend(family, a, &g.nodes, opts))
        })
        .collect::<Result<_>>()?;
    let score = per_a.iter().fold(Trend::Constant, |acc, (t, _)| acc.combine(*t));
    let values = ratio_values(family, &u, &v, a_grid, opts)?;

    let mut checks = vec![
        hypothesis_record("ratio: score monotone in t", score),
        hypothesis_record("ratio: u/v monotone in t", ratio_trend),
    ];
    let expected = match (score, ratio_trend) {
        (Trend::Mixed, _) | (_, Trend::Mixed) => None,
        (Trend::Constant, _) | (_, Trend::Constant) => Some(Trend::Constant),
        (s, r) if s == r => Some(Trend::Increasing),
        _ => Some(Trend::Decreasing),
    };
    let conclusion = match expected {
        None => CheckRecord::with_status("ratio: F monotone in a", f64::NAN, 0.0, Status::Inconclusive)
            .note("hypotheses fail on the grid, no conclusion drawn"),
        Some(dir) => {
            let (count, worst) = direction_violations(&values, dir, opts.sign_tol);
            CheckRecord::violations("ratio: F monotone in a", count)
                .witness("expected_trend", dir.code())
                .witness("worst_step", worst)
        }
    };
    checks.push(
        conclusion
            .witness("F_first", values[0])
            .witness("F_last", values[values.len() - 1]),
    );
    Ok(VerificationReport::new("framework", checks, opts.tolerances))
}

/// Level-`level` quantiles of the family over `a_grid`, from the
/// discretised distribution functions.
pub fn discrete_quantiles<F: DensityFamily + ?Sized>(
    family: &F,
    level: f64,
    a_grid: &[f64],
    opts: &GridOptions,
) -> Result<Vec<f64>> {
    Ok(quantile_scan(family, level, a_grid, opts)?
        .into_iter()
        .map(|s| s.q)
        .collect())
}

struct ScanPoint {
    q: f64,
    trend: Trend,
    strict: bool,
    truncated: f64,
}

fn quantile_scan<F: DensityFamily + ?Sized>(
    family: &F,
    level: f64,
    a_grid: &[f64],
    opts: &GridOptions,
) -> Result<Vec<ScanPoint>> {
    opts.validate()?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level must lie in (0, 1), got {level}")));
    }
    a_grid
        .par_iter()
        .map(|&a| {
            let g = WeightedGrid::for_family(family, a, opts)?;
            let q = g
                .cdf()
                .quantile(level)
                .ok_or_else(|| Error::domain(format!("level {level} not reached on the grid at a = {a}")))?;
            let (trend, strict) = score_trend(family, a, &g.nodes, opts);
            Ok(ScanPoint {
                q,
                trend,
                strict,
                truncated: g.truncated_mass,
            })
        })
        .collect()
}

/// A score d/da ln f increasing in x for every a makes every quantile
/// increasing in a; a decreasing score makes it decreasing.
pub fn quantile_monotonicity_check<F: DensityFamily + ?Sized>(
    family: &F,
    level: f64,
    a_grid: &[f64],
    opts: &GridOptions,
) -> Result<VerificationReport> {
    check_a_grid(a_grid)?;
    let scan = quantile_scan(family, level, a_grid, opts)?;
    let score = scan.iter().fold(Trend::Constant, |acc, s| acc.combine(s.trend));
    let all_strict = scan.iter().all(|s| s.strict);
    let qs: Vec<f64> = scan.iter().map(|s| s.q).collect();
    let truncated = scan.iter().map(|s| s.truncated).fold(0.0, f64::max);

    let mut checks = vec![hypothesis_record("quantile: score monotone in x", score).param("level", level)];
    if score == Trend::Mixed {
        checks.push(
            CheckRecord::with_status("quantile: monotone in a", f64::NAN, 0.0, Status::Inconclusive)
                .param("level", level)
                .note("score is not monotone in x on the grid, no conclusion drawn"),
        );
    } else {
        let (count, worst) = direction_violations(&qs, score, opts.sign_tol);
        checks.push(
            CheckRecord::violations("quantile: monotone in a", count)
                .param("level", level)
                .witness("expected_trend", score.code())
                .witness("worst_step", worst)
                .witness("q_first", qs[0])
                .witness("q_last", qs[qs.len() - 1])
                .witness("max_truncated_mass", truncated),
        );
        if all_strict {
            let (trend, strict) = trend_of(&qs, opts.sign_tol);
            let ok = strict && trend == score;
            let flat = qs
                .windows(2)
                .filter(|w| (w[1] - w[0]).abs() <= opts.sign_tol * w[0].abs().max(w[1].abs()))
                .count();
            checks.push(
                CheckRecord::violations("quantile: strictly monotone in a", if ok { 0 } else { flat.max(1) })
                    .param("level", level),
            );
        }
    }
    Ok(VerificationReport::new("framework", checks, opts.tolerances))
}

/// Quantiles of a sequence of distribution functions approach the quantile
/// interval of the limit. The last element stands for the limit point and
/// must land within `tolerance` of the limit's level set.
pub fn quantile_convergence_check(
    sequence: &[CdfGrid],
    limit: &CdfGrid,
    level: f64,
    tolerance: f64,
    tolerances: ToleranceConfig,
) -> VerificationReport {
    let name = "convergence: limit quantile in level set";
    let inconclusive = |why: &str| {
        VerificationReport::new(
            "framework",
            vec![CheckRecord::with_status(name, f64::NAN, tolerance, Status::Inconclusive)
                .param("level", level)
                .note(why.to_string())],
            tolerances,
        )
    };
    let Some((lo, hi)) = limit.level_bracket(level) else {
        return inconclusive("level set of the limit cannot be bracketed on its grid");
    };
    let qs: Option<Vec<f64>> = sequence.iter().map(|g| g.quantile(level)).collect();
    let qs = match qs {
        Some(v) if !v.is_empty() => v,
        _ => return inconclusive("a member of the sequence never reaches the level"),
    };
    let dist = |q: f64| (lo - q).max(q - hi).max(0.0);
    let last = qs[qs.len() - 1];
    let last_grid = &sequence[sequence.len() - 1];
    let at_edge = last <= last_grid.nodes[0] || last >= last_grid.nodes[last_grid.nodes.len() - 1];
    let mut rec = CheckRecord::bound(name, dist(last), tolerance)
        .param("level", level)
        .witness("q_first", qs[0])
        .witness("q_last", last)
        .witness("distance_first", dist(qs[0]))
        .witness("limit_lo", lo)
        .witness("limit_hi", hi);
    if at_edge {
        rec = rec.note("limit point sits on the edge of the truncated grid");
    }
    VerificationReport::new("framework", vec![rec], tolerances)
}
