use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use commands::*;
use error::{CliError, CliResult};

/// Thread count for the parallel parts (probe trials); unset means all cores.
const THREADS_VAR: &str = "FRIEDRICHS_THREADS";

#[derive(Parser)]
#[command(
    name = "friedrichs-lab",
    version,
    about = "Friedrichs operator experiments on weighted model spaces"
)]
struct Cli {
    /// JSON config file; its keys are the long flags of the command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the moment function I~(x) = ∫₀¹ r^x e^{-2/r} dr.
    Itilde(ItildeConfig),
    /// Exponent thresholds for given dimension and Diederich-Fornaess exponent.
    Thresholds(ThresholdsConfig),
    /// Friedrichs factors and F² eigenvalues over a degree range.
    Factors(FactorsConfig),
    /// Apply F, F² or the Bergman projection to a series file.
    Apply(ApplyConfig),
    /// Singular values and rank of F on a truncation.
    Spectrum(SpectrumConfig),
    /// Randomized lower bound for the L^q to L^p norm of F.
    Probe(ProbeConfig),
    /// Partial sums of the exponential-model convergence series.
    SeriesSum(SeriesSumConfig),
    /// Truncated L² and L^p integrals of the boundary counterexample.
    Counterexample(CounterexampleConfig),
    /// Run the acceptance suite.
    Verify(VerifyConfig),
}

macro_rules! dispatch {
    ($file:expr, $name:literal, $flags:expr, $run:path) => {{
        let cfg = config::resolve($name, $file, &$flags)?;
        let out = cfg.out.clone();
        ($run(cfg)?, out)
    }};
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}

fn run(cli: Cli) -> CliResult<bool> {
    configure_threads()?;
    let file = cli.config.as_deref();
    let (outcome, out) = match cli.command {
        Command::Itilde(f) => dispatch!(file, "itilde", f, itilde),
        Command::Thresholds(f) => dispatch!(file, "thresholds", f, thresholds),
        Command::Factors(f) => dispatch!(file, "factors", f, factors),
        Command::Apply(f) => dispatch!(file, "apply", f, apply),
        Command::Spectrum(f) => dispatch!(file, "spectrum", f, spectrum),
        Command::Probe(f) => dispatch!(file, "probe", f, probe),
        Command::SeriesSum(f) => dispatch!(file, "series-sum", f, series_sum),
        Command::Counterexample(f) => dispatch!(file, "counterexample", f, counterexample),
        Command::Verify(f) => dispatch!(file, "verify", f, verify),
    };
    output::emit(out.as_deref(), &outcome.body)?;
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    if !outcome.ok {
        eprintln!("error: a required check or convergence test failed; see the report");
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
