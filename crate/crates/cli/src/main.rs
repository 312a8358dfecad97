//! `fsl`: verification suites, canonical reduction and sup-norm estimation
//! from the command line.
//!
//! Exit codes: `0` every check passed, `1` some check failed, `2` usage,
//! configuration or input error.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fsl_core::batch::{self, Execution};
use fsl_core::forms::FormParams;
use fsl_core::norms::NamedCocycle;
use fsl_core::report::{CheckRecord, Report};
use fsl_core::verify::{run_suite, Suite, SuiteConfig};

use crate::io::{CliError, Output};

#[derive(Debug, Parser)]
#[command(name = "fsl", version, about = "Formed spaces, cross-ratios and volume cocycles: numerical verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an identity suite and report the largest residual of each check.
    Verify(VerifyArgs),
    /// Move a generic 3-, 4- or 5-tuple of isotropic points to its canonical form.
    Reduce(ReduceArgs),
    /// Estimate the sup norm of a cocycle by seeded Monte Carlo plus refinement.
    EstimateNorm(EstimateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Number of seeded trials (at least 1).
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Run seed; together with the command it determines the report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate trials on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Multiply every check threshold by this factor (> 0).
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// cross-ratios, hats, reduction, dilog, d3, cocycle, bbi-value, constants, norms or all.
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Sign of the form (+1 symmetric, -1 alternating); needs --d and --r.
    #[arg(long, allow_negative_numbers = true, value_parser = parse_eps, requires_all = ["d", "r"])]
    eps: Option<i8>,
    /// Parity of the dimension (0 or 1); needs --eps and --r.
    #[arg(long, requires_all = ["eps", "r"])]
    d: Option<u8>,
    /// Witt index; needs --eps and --d.
    #[arg(long, requires_all = ["eps", "d"])]
    r: Option<usize>,
    /// Flag dimensions for the cocycle suite.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    n: Vec<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// JSON input (stdin when absent).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// vol-p1, b4-so4 or b-n (with --n).
    #[arg(long)]
    cocycle: String,
    /// Flag dimension for `--cocycle b-n`.
    #[arg(long, default_value_t = 3)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: fsl_core::Error| e.to_string())
}

fn parse_eps(s: &str) -> Result<i8, String> {
    match s {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("epsilon must be +1 or -1, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("fsl: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FSL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage(format!("FSL_THREADS must be a positive integer, got {v:?}")))?;
        batch::init_thread_pool(n);
    }
    Ok(())
}

fn command_echo() -> Vec<String> {
    std::env::args().collect()
}

fn check_common(c: &Common) -> Result<Execution, CliError> {
    if c.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if !(c.tol_scale > 0.0 && c.tol_scale.is_finite()) {
        return Err(CliError::Usage("--tol-scale must be a positive number".into()));
    }
    Ok(if c.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    })
}

fn rescale(checks: Vec<CheckRecord>, factor: f64) -> Vec<CheckRecord> {
    if factor == 1.0 {
        return checks;
    }
    checks
        .into_iter()
        .map(|c| {
            let rec = CheckRecord::new(c.name, c.samples, c.max_residual, c.threshold * factor)
                .with_failures(c.failures);
            match c.note {
                Some(n) => rec.with_note(n),
                None => rec,
            }
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let start = Instant::now();
    match cli.command {
        Command::Verify(args) => {
            let exec = check_common(&args.common)?;
            let mut cfg = SuiteConfig::new(args.common.trials, args.common.seed)
                .with_exec(exec)
                .with_flag_dims(args.n.clone());
            if let (Some(eps), Some(d), Some(r)) = (args.eps, args.d, args.r) {
                let form = FormParams::new(eps, d, r).map_err(|e| CliError::Usage(e.to_string()))?;
                if r < form.r1() {
                    return Err(CliError::Usage(format!("r = {r} is below the minimum rank {} for this form", form.r1())));
                }
                cfg = cfg.with_form(form);
            }
            let checks = run_suite(args.suite, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            let checks = rescale(checks, args.common.tol_scale);
            let report = Report::new(command_echo(), args.common.seed, checks, start.elapsed().as_secs_f64());
            Output::new(report, None).emit(args.common.out.as_deref())
        }
        Command::Reduce(args) => {
            let text = io::read_input(args.input.as_deref())?;
            let (checks, result) = io::reduce_json(&text)?;
            let report = Report::new(command_echo(), 0, checks, start.elapsed().as_secs_f64());
            Output::new(report, result).emit(args.out.as_deref())
        }
        Command::EstimateNorm(args) => {
            let exec = check_common(&args.common)?;
            let cocycle: NamedCocycle = match args.cocycle.as_str() {
                "b-n" => format!("b-{}", args.n).parse(),
                other => other.parse(),
            }
            .map_err(|e: fsl_core::Error| CliError::Usage(e.to_string()))?;
            let (checks, result) = io::estimate(cocycle, args.common.trials, args.common.seed, exec)?;
            let checks = rescale(checks, args.common.tol_scale);
            let report = Report::new(command_echo(), args.common.seed, checks, start.elapsed().as_secs_f64());
            Output::new(report, Some(result)).emit(args.common.out.as_deref())
        }
    }
}
