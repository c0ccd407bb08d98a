//! Command-line experiment runner for the greedy block nonlinear Kaczmarz
//! solvers. Exit codes: 0 on batch completion, 2 on configuration errors,
//! 3 on i/o errors.

use clap::Parser;
use kaczmarz_bench::emit::{emit_history, emit_results, write_results};
use kaczmarz_bench::plan::{
    parse_float_grid, parse_method_list, parse_problem_list, parse_u32_list, parse_usize_list,
    ConfigFile, ExperimentPlan, OutputFormat,
};
use kaczmarz_bench::runner::{best_omega_summary, format_summary, run_plan};
use kaczmarz_bench::HarnessError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "kaczmarz-bench",
    about = "Benchmark runner for greedy block nonlinear Kaczmarz methods with momentum",
    after_help = "Value lists are comma separated; --omega and --rho also accept a \
                  start:step:end grid (e.g. 0.01:0.01:0.99). A momentum method swept at \
                  omega = 0 runs as its non-momentum counterpart. With --history, the \
                  residual history of the first result row (in table order) is written."
)]
struct Cli {
    /// Problem name(s): singular-broyden | broyden-tridiagonal | h-equation |
    /// h-equation-classical | nondquar
    #[arg(long)]
    problem: Option<String>,

    /// System size(s), e.g. 100 or 100,500,1000
    #[arg(long)]
    n: Option<String>,

    /// Method(s): rbwnk | mrwnk | rbwnk-m | mrwnk-m
    #[arg(long)]
    method: Option<String>,

    /// Residual-weight exponent(s) q >= 2 [default: 2]
    #[arg(long)]
    q: Option<String>,

    /// Momentum parameter(s) in [0, 1): value, list, or grid [default: 0]
    #[arg(long)]
    omega: Option<String>,

    /// Max-residual relaxation(s) in (0, 1]: value, list, or grid [default: 0.2]
    #[arg(long)]
    rho: Option<String>,

    /// Tolerance on the squared residual norm [default: 1e-6]
    #[arg(long)]
    eps: Option<f64>,

    /// Iteration cap [default: 10000]
    #[arg(long)]
    max_iter: Option<usize>,

    /// Timing repetitions per entry; the mean is reported [default: 10]
    #[arg(long)]
    repeats: Option<usize>,

    /// H-equation constant in (0, 1) [default: 0.9]
    #[arg(long)]
    c: Option<f64>,

    /// Output file; results go to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv | json [default: csv]
    #[arg(long)]
    format: Option<String>,

    /// Write the residual history (iter,res_norm_sq) of the first result row here
    #[arg(long)]
    history: Option<PathBuf>,

    /// Plain-text key=value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_plan(cli: &Cli) -> Result<ExperimentPlan, HarnessError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                HarnessError::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };

    // CLI flags override config-file values
    let problem = cli.problem.clone().or(file.problem);
    let n = cli.n.clone().or(file.n);
    let method = cli.method.clone().or(file.method);
    let q = cli.q.clone().or(file.q);
    let omega = cli.omega.clone().or(file.omega);
    let rho = cli.rho.clone().or(file.rho);
    let format = cli.format.clone().or(file.format);
    let out = cli.out.clone().or(file.out.map(PathBuf::from));
    let history = cli.history.clone().or(file.history.map(PathBuf::from));

    let cfg = |e: String| HarnessError::Config(e);
    let defaults = ExperimentPlan::default();
    let plan = ExperimentPlan {
        problems: parse_problem_list(
            problem
                .as_deref()
                .ok_or_else(|| cfg("--problem is required".into()))?,
        )
        .map_err(cfg)?,
        n_values: parse_usize_list(
            n.as_deref().ok_or_else(|| cfg("--n is required".into()))?,
        )
        .map_err(cfg)?,
        methods: parse_method_list(
            method
                .as_deref()
                .ok_or_else(|| cfg("--method is required".into()))?,
        )
        .map_err(cfg)?,
        q_values: match q.as_deref() {
            Some(s) => parse_u32_list(s).map_err(cfg)?,
            None => defaults.q_values,
        },
        omega_values: match omega.as_deref() {
            Some(s) => parse_float_grid(s).map_err(cfg)?,
            None => defaults.omega_values,
        },
        rho_values: match rho.as_deref() {
            Some(s) => parse_float_grid(s).map_err(cfg)?,
            None => defaults.rho_values,
        },
        eps: cli.eps.or(file.eps).unwrap_or(defaults.eps),
        max_iter: cli.max_iter.or(file.max_iter).unwrap_or(defaults.max_iter),
        repeats: cli.repeats.or(file.repeats).unwrap_or(defaults.repeats),
        c: cli.c.or(file.c).unwrap_or(defaults.c),
        out,
        format: match format.as_deref() {
            Some(s) => s.parse().map_err(cfg)?,
            None => OutputFormat::Csv,
        },
        history,
    };

    // momentum methods need a usable omega somewhere in the grid
    if plan.methods.iter().any(|m| m.uses_momentum())
        && plan.omega_values.iter().all(|&w| w == 0.0)
    {
        return Err(HarnessError::Config(
            "a momentum method was requested but every omega in the grid is 0; \
             pass --omega with a positive value or grid"
                .into(),
        ));
    }
    Ok(plan)
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    let plan = build_plan(cli)?;
    let output = run_plan(&plan)?;

    match &plan.out {
        Some(path) => emit_results(&output.rows, plan.format, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_results(&output.rows, plan.format, &mut lock)?;
        }
    }

    if let Some(path) = &plan.history {
        match output.reports.iter().flatten().next() {
            Some(report) => emit_history(report, path)?,
            None => {
                return Err(HarnessError::Config(
                    "--history requested but no run produced a report".into(),
                ))
            }
        }
    }

    // sweep summary goes to stderr so piped table output stays clean
    let summary = best_omega_summary(&output.rows);
    eprint!("{}", format_summary(&summary));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ HarnessError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ HarnessError::Io(_)) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
