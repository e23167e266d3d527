//! eqsp: sweep runner, scaling-exponent fitter, and oracle verifier for the
//! quantum phase-estimation protocol suite.
//!
//! Exit codes are a stable contract: 0 success, 1 runtime or check failure,
//! 2 usage/config error.

mod config;
mod fit;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sweep_harness::{rows_to_csv, run_sweep, FitMethod, Tolerance};

use config::{FileConfig, ModeArg, Profile, ProtocolArg};
use fit::MethodArg;
use verify::SuiteArg;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or config document: exit 2.
    Usage(String),
    /// The run itself failed or a check did not pass: exit 1.
    Runtime(String),
}

#[derive(Parser)]
#[command(name = "eqsp", version, about = "Phase-estimation protocol sweeps, fits, and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write the results CSV.
    Run(RunArgs),
    /// Fit T ~ eps^-alpha per configuration from a sweep CSV.
    Fit(FitArgs),
    /// Run the oracle-equivalence and invariant suites.
    Verify(VerifyArgs),
    /// Print a summary table for a sweep CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: Option<ProtocolArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Code distance parameter L (code size N = 2L+1).
    #[arg(long)]
    l: Option<u32>,
    /// Raw noise strength (depolarizing rate or transverse field).
    #[arg(long)]
    gamma: Option<f64>,
    /// Named noise level for the code protocols (e.g. 0.05).
    #[arg(long)]
    level: Option<f64>,
    /// Relative spread of per-qubit noise rates.
    #[arg(long)]
    heterogeneity_h: Option<f64>,
    /// Z-field inhomogeneity scale.
    #[arg(long)]
    sigma_eps: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    /// Experiment budget per eps target.
    #[arg(long)]
    budget: Option<u64>,
    /// Posterior grid resolution exponent (grid has 2^bits cells).
    #[arg(long)]
    grid_bits: Option<u32>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Sweep CSV to fit.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "ols")]
    method: MethodArg,
    /// Compare each configuration against the embedded reference tables.
    #[arg(long)]
    compare: bool,
    /// Allowed |alpha - reference| for --compare.
    #[arg(long, default_value_t = 0.2)]
    alpha_band: f64,
    /// Allowed acceptance-rate deviation for --compare, percentage points.
    #[arg(long, default_value_t = 5.0)]
    acceptance_band: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite instead of all of them.
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep CSV to summarize.
    input: PathBuf,
}

/// Cap the rayon worker pool from EQSP_THREADS (>= 1) if set.
fn init_threads() -> Result<(), CliError> {
    match std::env::var("EQSP_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| CliError::Usage(format!("EQSP_THREADS = {v:?} is not a positive integer")))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
        Err(_) => Ok(()),
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::from_path(p)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        protocol: args.protocol,
        mode: args.mode,
        l: args.l,
        gamma: args.gamma,
        level: args.level,
        heterogeneity_h: args.heterogeneity_h,
        sigma_eps: args.sigma_eps,
        omega: args.omega,
        profile: args.profile,
        seeds: None,
        eps_min: None,
        eps_max: None,
        eps_points: None,
        budget: args.budget,
        grid_bits: args.grid_bits,
    };
    let plan = config::resolve(&file.merged(&flags))?;
    let rows = run_sweep(&plan).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut text = rows_to_csv(&rows, &plan.config_hash());
    // Echo the fully-resolved plan right after the hash line for provenance.
    let echo = format!("# config {}\n", serde_json::to_string(&plan).expect("plan serializes"));
    let after_hash = text.find('\n').expect("csv has lines") + 1;
    text.insert_str(after_hash, &echo);
    std::fs::write(&args.out, &text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.out.display())))?;

    println!("wrote {} rows to {}", rows.len(), args.out.display());
    for (name, group) in fit::group_rows(rows) {
        match fit::fit_group(&group, FitMethod::Ols) {
            Ok((agg, fits)) => println!("{}", fit::summary_line(&name, &agg, fits, FitMethod::Ols)),
            Err(CliError::Runtime(m)) => println!("{name}: {m}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Fit(args) => fit::cmd_fit(
            &args.input,
            args.method.to_fit(),
            args.compare,
            Tolerance { alpha_band: args.alpha_band, acceptance_band_pct: args.acceptance_band },
        ),
        Command::Verify(args) => verify::cmd_verify(args.suite),
        Command::Report(args) => fit::cmd_report(&args.input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = init_threads().and_then(|()| dispatch(&cli));
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
