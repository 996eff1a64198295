//! `betainv` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad arguments or
//! parameters, 3 a numeric routine did not converge, 4 I/O failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use betainv::qframework::FrameworkInstance;
use betainv::series::{psi_prime_series, q_prime_series};
use betainv::{quantile, run_sweep, verify, BetaParams, Scale, Suite, SweepSpec, ToleranceConfig, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "betainv", version, about = "Beta quantiles as a function of the first shape parameter")]
struct Cli {
    /// Target for |I(q; a, b) - p|.
    #[arg(long, global = true, value_name = "TOL")]
    tol_quantile: Option<f64>,

    /// Relative accuracy demanded from the derivative series.
    #[arg(long, global = true, value_name = "TOL")]
    tol_series: Option<f64>,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Emit JSON instead of text where both are available.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve I(q; a, b) = p for q.
    Quantile(Point),
    /// Tabulate q, ln q, phi and the derivatives of psi over a range of a, as CSV.
    Sweep(SweepArgs),
    /// Run a verification suite and print the JSON report.
    Verify(VerifyArgs),
    /// Compare the derivative series with finite differences at one point.
    Derivative(Point),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Point {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    p: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long)]
    b: f64,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.01)]
    a_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    a_max: f64,
    #[arg(long, default_value_t = 60)]
    points: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Log)]
    scale: ScaleArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Identities,
    Monotonicity,
    Convexity,
    Logconcavity,
    Framework,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,

    /// JSON list of extra families for the framework suite, each
    /// {"family": {"kind": ...}, "level": p, "a_grid": [...]}.
    #[arg(long, value_name = "PATH")]
    families: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Numeric(#[from] betainv::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    BadConfig { path: String, source: serde_json::Error },
    #[error("{0} check(s) failed")]
    Failed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Numeric(e) if e.is_convergence() => 3,
            CliError::Numeric(_) | CliError::BadConfig { .. } => 2,
            CliError::Io { .. } => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("betainv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, CliError> {
    let mut tol = ToleranceConfig::default();
    if let Some(t) = cli.tol_quantile {
        tol.quantile_abs_tol = t;
    }
    if let Some(t) = cli.tol_series {
        tol.series_tail_tol = t;
    }
    tol.validate()?;
    Ok(tol)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Quantile(pt) => {
            let r = quantile(BetaParams::new(pt.a, pt.b, pt.p)?, &tol)?;
            let rec = json!({
                "a": pt.a,
                "b": pt.b,
                "p": pt.p,
                "q": r.q,
                "psi": r.psi,
                "phi": pt.a * r.psi,
                "one_minus_q": r.one_minus_q,
                "residual": r.residual,
                "iterations": r.iterations,
                "bracket_width": r.bracket_width,
            });
            emit(cli, &render(&rec, cli.json))
        }
        Command::Sweep(s) => {
            let spec = SweepSpec {
                b: s.b,
                p: s.p,
                a_min: s.a_min,
                a_max: s.a_max,
                points: s.points,
                scale: match s.scale {
                    ScaleArg::Linear => Scale::Linear,
                    ScaleArg::Log => Scale::Log,
                },
            };
            let rows = run_sweep(&spec, &tol)?;
            let text = if cli.json {
                let mut t = serde_json::to_string_pretty(&rows).expect("rows serialise");
                t.push('\n');
                t
            } else {
                betainv::sweep::to_csv(&rows)
            };
            emit(cli, &text)
        }
        Command::Verify(v) => {
            let mut opts = VerifyOptions {
                tolerances: tol,
                ..VerifyOptions::default()
            };
            if let Some(path) = &v.families {
                opts.instances = read_instances(path)?;
            }
            let suite = match v.suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Monotonicity => Suite::Monotonicity,
                SuiteArg::Convexity => Suite::Convexity,
                SuiteArg::Logconcavity => Suite::Logconcavity,
                SuiteArg::Framework => Suite::Framework,
                SuiteArg::All => Suite::All,
            };
            let report = verify::run(suite, &opts)?;
            let mut text = report.to_json();
            text.push('\n');
            emit(cli, &text)?;
            let failed = report.failures().count();
            eprintln!("verify {}: {} checks, {} failed", report.suite, report.checks.len(), failed);
            if failed > 0 {
                for c in report.failures() {
                    eprintln!("  FAIL {} {:?}: residual {:e} > {:e}", c.name, c.params, c.residual, c.tolerance);
                }
                return Err(CliError::Failed(failed));
            }
            Ok(())
        }
        Command::Derivative(pt) => {
            let rec = derivative_record(pt, &tol)?;
            emit(cli, &render(&rec, cli.json))
        }
    }
}

fn rel_gap(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn derivative_record(pt: &Point, tol: &ToleranceConfig) -> Result<Value, CliError> {
    let solve = |a: f64| quantile(BetaParams::new(a, pt.b, pt.p)?, tol);
    let mid = solve(pt.a)?;
    let h = tol.fd_rel_step * pt.a;
    let (lo, hi) = (solve(pt.a - h)?, solve(pt.a + h)?);
    let (series, diag) = psi_prime_series(pt.a, pt.b, pt.p, tol)?;
    let fd = (hi.psi - lo.psi) / (2.0 * h);
    let q_series = q_prime_series(pt.a, pt.b, pt.p, tol)?;
    let q_from_psi = -mid.q * series;
    let q_fd = (hi.q - lo.q) / (2.0 * h);
    Ok(json!({
        "a": pt.a,
        "b": pt.b,
        "p": pt.p,
        "psi_prime_series": series,
        "psi_prime_fd": fd,
        "q_prime_series": q_series,
        "q_prime_from_psi": q_from_psi,
        "q_prime_fd": q_fd,
        "gap_psi_series_fd": rel_gap(series, fd),
        "gap_q_series_from_psi": rel_gap(q_series, q_from_psi),
        "gap_q_series_fd": rel_gap(q_series, q_fd),
        "gap_q_from_psi_fd": rel_gap(q_from_psi, q_fd),
        "series_terms": diag.terms_used,
        "series_tail_estimate": diag.tail_estimate,
    }))
}

/// One `key = value` line per field, or pretty JSON.
fn render(rec: &Value, as_json: bool) -> String {
    let mut text = if as_json {
        serde_json::to_string_pretty(rec).expect("record serialises")
    } else {
        let obj = rec.as_object().expect("records are objects");
        let width = obj.keys().map(String::len).max().unwrap_or(0);
        obj.iter()
            .map(|(k, v)| format!("{k:<width$} = {}", fmt_value(v)))
            .collect::<Vec<_>>()
            .join("\n")
    };
    text.push('\n');
    text
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn read_instances(path: &Path) -> Result<Vec<FrameworkInstance>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::BadConfig {
        path: path.display().to_string(),
        source,
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
