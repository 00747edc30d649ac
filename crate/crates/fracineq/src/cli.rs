//! Command-line front end: argument parsing, dispatch and output formatting.
//!
//! Exit codes: `0` success, `1` verification failure or numerical failure,
//! `2` usage or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{additive_coefficients, sharp_constant, ProblemSpec};
use crate::catalog::{build_case, figure_data, CaseId, ExtremalPair, Phi};
use crate::error::{Error, Result};
use crate::funcmodel::{DomainKind, Func, NormSpec, PiecewiseFunction};
use crate::marchaud::{by_definition, by_representation};
use crate::quad::set_default_tolerance;
use crate::verify::{check_inequality, check_monotone_maximizer, check_relation8, Report};

/// Environment variable overriding the default quadrature tolerance.
pub const TOL_ENV: &str = "FRACINEQ_TOL";

#[derive(Debug, Parser)]
#[command(name = "fracineq", version, about = "Sharp Kolmogorov-type inequalities for Marchaud fractional derivatives")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sharp constant for a problem specification.
    Constant(ConstantArgs),
    /// Marchaud derivative of a function read from a JSON file.
    Derivative(DerivativeArgs),
    /// Extremal pair of a case, optionally with figure data.
    Extremal(ExtremalArgs),
    /// Parameters of the extremal function of a case.
    Solve(CaseArgs),
    /// Best approximation value E_N of D^k by operators of norm at most N.
    Stechkin(StechkinArgs),
    /// Optimal recovery error for data given with error delta.
    Recover(RecoverArgs),
    /// Feasibility of prescribed norms of f, D^k f and f''.
    ThreeNumbers(ThreeNumbersArgs),
    /// Batch verification of the inequality and the dual representation.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ConstantArgs {
    /// `r` for the line, `r+` for the half-line.
    #[arg(long, value_parser = parse_domain)]
    domain: DomainKind,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    k: f64,
    #[arg(long, value_parser = parse_norm)]
    p: NormSpec,
    #[arg(long, value_parser = parse_norm)]
    q: NormSpec,
    #[arg(long, value_parser = parse_norm)]
    s: NormSpec,
    /// Also report the additive coefficients at this scale.
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Defining integral of finite differences.
    Def,
    /// Representation through the r-th derivative.
    Rep,
}

#[derive(Debug, Args)]
struct DerivativeArgs {
    /// Piecewise function in the JSON schema of the library.
    #[arg(long = "fn")]
    file: PathBuf,
    #[arg(long)]
    k: f64,
    #[arg(long, value_enum, default_value_t = Method::Rep)]
    method: Method,
    /// Order of the difference (def) or of the derivative (rep); defaults to floor(k) + 1.
    #[arg(long)]
    n: Option<usize>,
    /// Evaluation points.
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    at: Vec<f64>,
}

#[derive(Debug, Args)]
struct CaseArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    #[arg(long)]
    k: f64,
    #[arg(long, value_parser = parse_norm)]
    s: NormSpec,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Writes the three figure panels as CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Number of plot samples.
    #[arg(long, default_value_t = 401)]
    points: usize,
}

#[derive(Debug, Args)]
struct StechkinArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long = "N")]
    n: f64,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long)]
    delta: f64,
}

#[derive(Debug, Args)]
struct ThreeNumbersArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long = "M0")]
    m0: f64,
    #[arg(long = "Mk")]
    mk: f64,
    #[arg(long = "Mr")]
    mr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Inequality,
    Relation8,
    Maximizer,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long, default_value_t = 100)]
    batch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Check::All)]
    check: Check,
}

fn parse_norm(s: &str) -> std::result::Result<NormSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_domain(s: &str) -> std::result::Result<DomainKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_case(s: &str) -> std::result::Result<CaseId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a command before it is mapped to an exit code.
enum Outcome {
    Ok,
    Failed,
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    if let Ok(v) = std::env::var(TOL_ENV) {
        match v.parse::<f64>() {
            Ok(tol) if tol > 0.0 && tol.is_finite() => set_default_tolerance(tol),
            _ => {
                let _ = writeln!(err, "error: {TOL_ENV} must be a positive number, got '{v}'");
                return 2;
            }
        }
    }
    match dispatch(&cli, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io_err)?;
    writeln!(out, "{text}").map_err(io_err)
}

fn emit_scalar(out: &mut dyn Write, format: Output, name: &str, value: f64) -> Result<()> {
    match format {
        Output::Json => emit_json(out, &json!({ name: value })),
        Output::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([name]).map_err(io_err)?;
            w.write_record([value.to_string()]).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        Output::Text => writeln!(out, "{value}").map_err(io_err),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let format = cli.output;
    match &cli.command {
        Command::Constant(a) => {
            let spec = ProblemSpec::new(a.domain, a.k, a.r, a.p, a.q, a.s)?;
            let result = sharp_constant(&spec)?;
            let additive = match a.h {
                Some(h) => {
                    let (ah, bh) = additive_coefficients(&spec, h)?;
                    Some(json!({ "h": h, "A": ah, "B": bh }))
                }
                None => None,
            };
            match format {
                Output::Json => {
                    let mut v = serde_json::to_value(&result).map_err(io_err)?;
                    if let Some(add) = additive {
                        v["additive"] = add;
                    }
                    emit_json(out, &v)?;
                }
                Output::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["case", "k", "s", "lambda", "K", "A1", "B1"]).map_err(io_err)?;
                    w.write_record([
                        result.case.to_string(),
                        result.k.to_string(),
                        result.s.to_string(),
                        result.lambda.to_string(),
                        result.k_sharp.to_string(),
                        result.a1.to_string(),
                        result.b1.to_string(),
                    ])
                    .map_err(io_err)?;
                    w.flush().map_err(io_err)?;
                }
                Output::Text => writeln!(out, "K = {} (lambda = {}, case {})", result.k_sharp, result.lambda, result.case)
                    .map_err(io_err)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Derivative(a) => {
            let text = fs::read_to_string(&a.file).map_err(|e| Error::Domain(format!("{}: {e}", a.file.display())))?;
            let f: PiecewiseFunction =
                serde_json::from_str(&text).map_err(|e| Error::Domain(format!("{}: {e}", a.file.display())))?;
            let n = a.n.unwrap_or(a.k.floor() as usize + 1);
            let values: Vec<(f64, f64)> = a
                .at
                .iter()
                .map(|&x| {
                    let v = match a.method {
                        Method::Def => by_definition(&f, a.k, n, x)?,
                        Method::Rep => by_representation(&f, a.k, n, x)?,
                    };
                    Ok((x, v))
                })
                .collect::<Result<_>>()?;
            match format {
                Output::Json => emit_json(
                    out,
                    &values.iter().map(|(x, v)| json!({ "x": x, "value": v })).collect::<Vec<_>>(),
                )?,
                Output::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["x", "value"]).map_err(io_err)?;
                    for (x, v) in &values {
                        w.write_record([x.to_string(), v.to_string()]).map_err(io_err)?;
                    }
                    w.flush().map_err(io_err)?;
                }
                Output::Text => {
                    for (x, v) in &values {
                        writeln!(out, "{x}\t{v}").map_err(io_err)?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Extremal(a) => {
            let c = &a.case;
            let pair = build_case(c.case, c.k, c.s, a.h)?;
            if let Some(path) = &a.plot {
                let mut file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                write_plot(&mut file, &pair, a.points)?;
            }
            match format {
                Output::Csv => write_plot(out, &pair, a.points)?,
                _ => emit_json(out, &pair_summary(&pair)?)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Solve(c) => {
            let pair = build_case(c.case, c.k, c.s, 1.0)?;
            let params = pair
                .params
                .ok_or_else(|| Error::Unsupported(format!("case {} has no parameters to solve for", c.case)))?;
            emit_json(out, &params)?;
            Ok(Outcome::Ok)
        }
        Command::Stechkin(a) => {
            let result = sharp_constant(&ProblemSpec::for_case(a.case.case, a.case.k, a.case.s)?)?;
            emit_scalar(out, format, "E_N", result.stechkin_value(a.n)?)?;
            Ok(Outcome::Ok)
        }
        Command::Recover(a) => {
            let result = sharp_constant(&ProblemSpec::for_case(a.case.case, a.case.k, a.case.s)?)?;
            emit_scalar(out, format, "error", result.recovery_error(a.delta)?)?;
            Ok(Outcome::Ok)
        }
        Command::ThreeNumbers(a) => {
            let result = sharp_constant(&ProblemSpec::for_case(a.case.case, a.case.k, a.case.s)?)?;
            let verdict = result.three_numbers(a.m0, a.mk, a.mr)?;
            match format {
                Output::Text => writeln!(out, "{:?}", verdict.verdict).map_err(io_err)?,
                _ => emit_json(out, &verdict)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Verify(a) => {
            let c = &a.case;
            let spec = ProblemSpec::for_case(c.case, c.k, c.s)?;
            let mut reports: Vec<Report> = Vec::new();
            if matches!(a.check, Check::Inequality | Check::All) {
                reports.push(check_inequality(&spec, a.batch, a.seed)?);
            }
            let pair = build_case(c.case, c.k, c.s, 1.0)?;
            if matches!(a.check, Check::Relation8 | Check::All) {
                reports.push(check_relation8(&pair, a.batch, a.seed)?);
            }
            if a.check == Check::Maximizer || (a.check == Check::All && matches!(pair.phi, Phi::Exact(_))) {
                reports.push(check_monotone_maximizer(&pair)?);
            }
            let pass = reports.iter().all(|r| r.pass);
            match format {
                Output::Json => emit_json(out, &json!({ "case": c.case, "pass": pass, "reports": reports }))?,
                Output::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["check", "index", "value"]).map_err(io_err)?;
                    for r in &reports {
                        for (i, v) in r.residuals.iter().enumerate() {
                            w.write_record([r.check.clone(), i.to_string(), v.to_string()]).map_err(io_err)?;
                        }
                    }
                    w.flush().map_err(io_err)?;
                }
                Output::Text => {
                    for r in &reports {
                        writeln!(out, "{}: {} (max {:e})", r.check, if r.pass { "pass" } else { "FAIL" }, r.max_ratio)
                            .map_err(io_err)?;
                    }
                }
            }
            Ok(if pass { Outcome::Ok } else { Outcome::Failed })
        }
    }
}

#[derive(Serialize)]
struct PairSummary {
    case: CaseId,
    k: f64,
    s: NormSpec,
    h: f64,
    figure: Option<u8>,
    params: Option<crate::solvers::ExtremalParams>,
    total_variation: f64,
    omega: PiecewiseFunction,
    /// Exact piecewise extremal function when available.
    phi: Option<PiecewiseFunction>,
    phi_kind: &'static str,
    phi_sup_norm: f64,
}

fn pair_summary(pair: &ExtremalPair) -> Result<PairSummary> {
    let (phi, kind) = match &pair.phi {
        Phi::Exact(Func::Piecewise(f)) => (Some(f.clone()), "piecewise"),
        Phi::Exact(Func::Integrated(_)) => (None, "integrated-density"),
        Phi::Family(_) => (None, "epsilon-family"),
    };
    Ok(PairSummary {
        case: pair.case,
        k: pair.k,
        s: pair.s,
        h: pair.h,
        figure: pair.case.figure(),
        params: pair.params.clone(),
        total_variation: pair.measure.total_variation()?,
        omega: pair.omega.clone(),
        phi,
        phi_kind: kind,
        phi_sup_norm: pair.phi_at(None)?.sup_norm()?,
    })
}

/// Header line naming what a plot file reproduces.
pub fn plot_caption(pair: &ExtremalPair) -> String {
    let panels = "panels: Gamma(r-k) R_{r-k} and omega^[r-1]; tau; phi";
    match pair.case.figure() {
        Some(n) => format!("# Figure {n} ({}, k = {}, s = {}); {panels}", pair.case, pair.k, pair.s),
        None => format!("# Extremal pair {} (k = {}, s = {}), no numbered figure; {panels}", pair.case, pair.k, pair.s),
    }
}

/// Writes the figure panels as CSV preceded by a caption comment.
pub fn write_plot(out: &mut dyn Write, pair: &ExtremalPair, points: usize) -> Result<()> {
    writeln!(out, "{}", plot_caption(pair)).map_err(io_err)?;
    let rows = figure_data(pair, points)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "kernel", "omega1", "tau", "phi"]).map_err(io_err)?;
    for row in rows {
        w.write_record([
            row.x.to_string(),
            row.kernel.to_string(),
            row.omega_integral.to_string(),
            row.tau.to_string(),
            row.phi.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
