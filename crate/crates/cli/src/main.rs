//! `fracsemi`: evaluate fractional heat kernels, assemble and solve the
//! Dirichlet operator on an interval, study the s↑1 limit, and run the
//! verification suite.
//!
//! Exit codes: 0 when everything requested succeeded (and every executed
//! check passed), 1 on a check failure or numerical error, 2 on usage
//! errors.

mod config;
mod output;
mod pool;

use clap::{Args, Parser, Subcommand};
use config::{
    parse_list, pick, pick_required, resolve_interval, validate_dim, validate_s, FileConfig,
    GridArgs, ResolvedConfig,
};
use fracsemi_core::discrete::{assemble_dirichlet, solve_exterior_dirichlet, spectrum, Grid1D};
use fracsemi_core::fraclap::{convergence_to_laplacian, ScalarField1D};
use fracsemi_core::kernel::{
    heat_kernel_fourier, heat_kernel_subordinated, poisson_kernel_closed, KernelQuery,
};
use fracsemi_core::specfun::FractionalOrder;
use fracsemi_core::verify::{suite_jobs, CheckReport, SuiteConfig, SUITE_CHECK_NAMES};
use output::{csv, emit, Cell};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config: exit code 2.
    Usage(String),
    /// Numerical failure or failed checks: exit code 1.
    Failed(String),
}

impl From<fracsemi_core::Error> for CliError {
    fn from(e: fracsemi_core::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "fracsemi",
    version,
    about = "Fractional heat semigroup toolkit: kernels, interval operators, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the fractional heat kernel P_s(t, r)
    Kernel(KernelArgs),
    /// Eigenvalues of the Dirichlet operator on an interval
    Spectrum(SpectrumArgs),
    /// Solve (-Δ)_D^s u + λ u = f on an interval
    Solve(SolveArgs),
    /// s↑1 convergence table for the Gaussian pair
    Convergence(ConvergenceArgs),
    /// Run verification checks and emit a JSON report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct KernelArgs {
    /// Fractional exponent in (0, 1)
    #[arg(long)]
    s: Option<f64>,
    /// Spatial dimension (1, 2 or 3)
    #[arg(long = "N")]
    n_dim: Option<u32>,
    /// Time, or comma-separated list of times
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Distance, or comma-separated list of distances
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Evaluation route: subordination, fourier, or closed (s = 1/2 only)
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// JSON file with defaults for any of the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    s: Option<f64>,
    /// Number of leading eigenvalues to emit
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    s: Option<f64>,
    /// Nonnegative zero-order coefficient
    #[arg(long)]
    lambda: Option<f64>,
    /// Right-hand side: one, gaussian, or bump
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Comma-separated exponents approaching 1
    #[arg(long = "s-list")]
    s_list: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check name, or "all"
    #[arg(default_value = "all")]
    target: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    s: Option<f64>,
    /// Seed for the sampled checks
    #[arg(long)]
    seed: Option<u64>,
    /// Random-sample count per sampled check
    #[arg(long)]
    samples: Option<usize>,
    /// Times for the domination and monotonicity checks
    #[arg(long = "t-list", allow_hyphen_values = true)]
    t_list: Option<String>,
    /// Weakening exponent for the complex kernel bound, in (0, 1]
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Kernel(args) => run_kernel(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Solve(args) => run_solve(args),
        Command::Convergence(args) => run_convergence(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn check_format<'a>(
    format: Option<&'a str>,
    allowed: &[&str],
    default: &'a str,
) -> Result<&'a str, CliError> {
    let fmt = format.unwrap_or(default);
    if allowed.contains(&fmt) {
        Ok(fmt)
    } else {
        Err(CliError::Usage(format!(
            "--format: {fmt:?} not supported here (expected one of {allowed:?})"
        )))
    }
}

#[derive(Serialize)]
struct SweepReport<C: Serialize, R: Serialize> {
    version: &'static str,
    config: C,
    rows: Vec<R>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Failed(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn run_kernel(args: KernelArgs) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(args.config.as_ref())?;
    let s = validate_s(pick_required(args.s, file.s, "s")?)?;
    let n_dim = validate_dim(pick(args.n_dim, file.n_dim, 1))?;
    let t_list = parse_list("t", &pick(args.t, file.t.clone(), "1".into()))?;
    let r_list = parse_list("r", &pick(args.r, file.r.clone(), "0".into()))?;
    let method = pick(args.method, file.method.clone(), "subordination".into());
    let format = check_format(
        args.format.as_deref().or(file.format.as_deref()),
        &["csv", "json"],
        "csv",
    )?;

    for &t in &t_list {
        if t <= 0.0 {
            return Err(CliError::Usage(format!("--t: times must be positive, got {t}")));
        }
    }
    for &r in &r_list {
        if r < 0.0 {
            return Err(CliError::Usage(format!(
                "--r: distances must be nonnegative, got {r}"
            )));
        }
    }
    match method.as_str() {
        "closed" => {
            if s != 0.5 {
                return Err(CliError::Usage(format!(
                    "--method closed is the s = 1/2 Poisson kernel; got --s {s}"
                )));
            }
        }
        "fourier" => {
            if n_dim != 1 {
                return Err(CliError::Usage(format!(
                    "--method fourier is one-dimensional; got --N {n_dim}"
                )));
            }
        }
        "subordination" => {}
        other => {
            return Err(CliError::Usage(format!(
                "--method: expected closed, subordination or fourier, got {other:?}"
            )))
        }
    }

    let order = FractionalOrder::new(s, n_dim).map_err(CliError::from)?;
    let mut rows = Vec::new();
    for &t in &t_list {
        for &r in &r_list {
            let value = match method.as_str() {
                "closed" => poisson_kernel_closed(t, r, n_dim)?,
                "fourier" => {
                    heat_kernel_fourier(&KernelQuery::real_time(t, r, order)?)?.re
                }
                _ => heat_kernel_subordinated(&KernelQuery::real_time(t, r, order)?)?,
            };
            rows.push((t, r, value));
        }
    }

    if rows.len() == 1 && args.out.is_none() && file.out.is_none() && format == "csv" {
        println!("{}", rows[0].2);
        return Ok(ExitCode::SUCCESS);
    }

    let content = if format == "json" {
        #[derive(Serialize)]
        struct Row {
            t: f64,
            r: f64,
            s: f64,
            #[serde(rename = "N")]
            n_dim: u32,
            method: String,
            value: f64,
        }
        #[derive(Serialize)]
        struct Config {
            command: &'static str,
            s: f64,
            #[serde(rename = "N")]
            n_dim: u32,
            method: String,
        }
        to_json(&SweepReport {
            version: env!("CARGO_PKG_VERSION"),
            config: Config {
                command: "kernel",
                s,
                n_dim,
                method: method.clone(),
            },
            rows: rows
                .iter()
                .map(|&(t, r, value)| Row {
                    t,
                    r,
                    s,
                    n_dim,
                    method: method.clone(),
                    value,
                })
                .collect(),
        })?
    } else {
        let method_text: &'static str = match method.as_str() {
            "closed" => "closed",
            "fourier" => "fourier",
            _ => "subordination",
        };
        csv(
            &["t", "r", "s", "N", "method", "value"],
            &rows
                .iter()
                .map(|&(t, r, value)| {
                    vec![
                        Cell::Num(t),
                        Cell::Num(r),
                        Cell::Num(s),
                        Cell::Int(n_dim as i64),
                        Cell::Text(method_text),
                        Cell::Num(value),
                    ]
                })
                .collect::<Vec<_>>(),
        )
    };
    emit(args.out.as_ref().or(file.out.as_ref()), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn make_grid(
    grid_args: &GridArgs,
    file: &FileConfig,
    default_n: usize,
) -> Result<Grid1D<f64>, CliError> {
    let (a, b) = resolve_interval(grid_args, file, (-1.0, 1.0))?;
    let n = pick(grid_args.n, file.n, default_n);
    Grid1D::new(a, b, n).map_err(|e| CliError::Usage(e.to_string()))
}

fn run_spectrum(args: SpectrumArgs) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(args.config.as_ref())?;
    let s = validate_s(pick_required(args.s, file.s, "s")?)?;
    let grid = make_grid(&args.grid, &file, 256)?;
    let k = pick(args.k, file.k, 10);
    check_format(
        args.format.as_deref().or(file.format.as_deref()),
        &["csv"],
        "csv",
    )?;
    let order = FractionalOrder::new(s, 1).map_err(CliError::from)?;
    let op = assemble_dirichlet(grid, order)?;
    let spec = spectrum(&op, k)?;
    let rows: Vec<Vec<Cell>> = spec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, &ev)| vec![Cell::Int(i as i64 + 1), Cell::Num(ev)])
        .collect();
    emit(
        args.out.as_ref().or(file.out.as_ref()),
        &csv(&["index", "eigenvalue"], &rows),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(args.config.as_ref())?;
    let s = validate_s(pick_required(args.s, file.s, "s")?)?;
    let grid = make_grid(&args.grid, &file, 256)?;
    let lambda = pick(args.lambda, file.lambda, 0.0);
    if lambda < 0.0 {
        return Err(CliError::Usage(format!(
            "--lambda: shift must be nonnegative, got {lambda}"
        )));
    }
    let rhs_name = pick(args.f, file.f.clone(), "one".into());
    check_format(
        args.format.as_deref().or(file.format.as_deref()),
        &["csv"],
        "csv",
    )?;

    let width = grid.b() - grid.a();
    let center = 0.5 * (grid.a() + grid.b());
    let rhs: Vec<f64> = match rhs_name.as_str() {
        "one" => vec![1.0; grid.len()],
        "gaussian" => grid.nodes().iter().map(|&x| (-(x * x)).exp()).collect(),
        "bump" => {
            let field = ScalarField1D::cosine_bump(center, 0.25 * width);
            grid.nodes().iter().map(|&x| field.eval(x)).collect()
        }
        other => {
            return Err(CliError::Usage(format!(
                "--f: expected one, gaussian or bump, got {other:?}"
            )))
        }
    };

    let order = FractionalOrder::new(s, 1).map_err(CliError::from)?;
    let op = assemble_dirichlet(grid, order)?;
    let u = solve_exterior_dirichlet(&op, lambda, &rhs)?;
    let rows: Vec<Vec<Cell>> = grid
        .nodes()
        .iter()
        .zip(&u)
        .map(|(&x, &v)| vec![Cell::Num(x), Cell::Num(v)])
        .collect();
    emit(args.out.as_ref().or(file.out.as_ref()), &csv(&["x", "u"], &rows))?;
    Ok(ExitCode::SUCCESS)
}

fn run_convergence(args: ConvergenceArgs) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(args.config.as_ref())?;
    let s_list = parse_list(
        "s-list",
        &pick(args.s_list, file.s_list.clone(), "0.9,0.99,0.999".into()),
    )?;
    for &s in &s_list {
        validate_s(s)?;
    }
    check_format(
        args.format.as_deref().or(file.format.as_deref()),
        &["csv"],
        "csv",
    )?;
    let g = ScalarField1D::gaussian();
    let rows = convergence_to_laplacian(&g, &g, &s_list)?;
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Num(r.s),
                Cell::Num(r.lhs),
                Cell::Num(r.rhs),
                Cell::Num(r.gap),
            ]
        })
        .collect();
    emit(
        args.out.as_ref().or(file.out.as_ref()),
        &csv(&["s", "lhs", "rhs", "gap"], &cells),
    )?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    version: &'static str,
    config: ResolvedConfig,
    checks: Vec<CheckReport>,
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(args.config.as_ref())?;
    let s = validate_s(pick(args.s, file.s, 0.5))?;
    let grid = make_grid(&args.grid, &file, 256)?;
    let seed = pick(args.seed, file.seed, 42);
    let samples = pick(args.samples, file.samples, 100);
    let t_list = parse_list(
        "t-list",
        &pick(args.t_list, file.t_list.clone(), "0.01,0.1,1".into()),
    )?;
    let epsilon = pick(args.epsilon, file.epsilon, 0.5);
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(CliError::Usage(format!(
            "--epsilon: weakening exponent must lie in (0, 1], got {epsilon}"
        )));
    }
    check_format(
        args.format.as_deref().or(file.format.as_deref()),
        &["json"],
        "json",
    )?;

    let order = FractionalOrder::new(s, 1).map_err(CliError::from)?;
    let mut suite = SuiteConfig::new(grid, order, seed);
    suite.sample_count = samples;
    suite.t_list = t_list.clone();
    suite.epsilon = epsilon;

    let jobs = suite_jobs(&suite)?;
    let jobs = if args.target == "all" {
        jobs
    } else {
        let filtered: Vec<_> = jobs
            .into_iter()
            .filter(|(name, _)| *name == args.target)
            .collect();
        if filtered.is_empty() {
            return Err(CliError::Usage(format!(
                "unknown check {:?}; available: all, {}",
                args.target,
                SUITE_CHECK_NAMES.join(", ")
            )));
        }
        filtered
    };

    let checks = pool::run_jobs(jobs, pool::worker_count())?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect();

    let report = VerifyReport {
        version: env!("CARGO_PKG_VERSION"),
        config: ResolvedConfig {
            command: "verify".into(),
            target: Some(args.target.clone()),
            s,
            n_dim: 1,
            a: Some(grid.a()),
            b: Some(grid.b()),
            n: Some(grid.len()),
            t_list: Some(t_list),
            samples: Some(samples),
            epsilon: Some(epsilon),
            seed,
        },
        checks,
    };
    emit(args.out.as_ref().or(file.out.as_ref()), &to_json(&report)?)?;

    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
