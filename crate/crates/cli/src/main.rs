//! `effort-fit`: fit COCOMO-family effort models with Firefly, GA and PSO.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use effort_core::harness::BoundOverride;
use effort_core::{Algorithm, ModelSpec};

#[derive(Debug, Parser)]
#[command(
    name = "effort-fit",
    version,
    about = "Metaheuristic fitting of COCOMO-family effort models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one model with one optimizer over repeated seeded runs.
    Fit(FitArgs),
    /// Fit every model with every optimizer and render comparison tables.
    Compare(CommonArgs),
    /// Evaluate explicit coefficients on a dataset.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Input CSV with columns id,kloc,me,effort (default: built-in NASA-18 data).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Independent runs per experiment.
    #[arg(long, default_value_t = effort_core::harness::DEFAULT_RUNS)]
    pub runs: usize,
    /// Iterations per run.
    #[arg(long, default_value_t = effort_core::optimizers::DEFAULT_ITERATIONS)]
    pub iters: usize,
    /// Population size (fireflies, chromosomes, particles).
    #[arg(long, default_value_t = effort_core::optimizers::DEFAULT_POPULATION)]
    pub population: usize,
    /// Master seed; per-run seeds are derived from it.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of leading records used for training; the rest are for testing.
    #[arg(long, default_value_t = effort_core::dataset::NASA_TRAIN_COUNT)]
    pub train_count: usize,
    /// Coefficient bound override, e.g. `--bound d=-50:50`. Repeatable.
    #[arg(long = "bound", value_name = "NAME=LO:HI", value_parser = parse_bound)]
    pub bounds: Vec<BoundOverride>,
    /// Directory for report, trace and table files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads for parallel runs (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelSpec,
    #[arg(long, value_parser = parse_algorithm)]
    pub optimizer: Algorithm,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelSpec,
    /// Comma-separated coefficients a,b[,c[,d]].
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        required = true
    )]
    pub coef: Vec<f64>,
    /// Input CSV (default: built-in NASA-18 data).
    #[arg(long)]
    pub data: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<ModelSpec, String> {
    s.parse()
        .map_err(|_| format!("unknown model '{s}', expected basic, model1 or model2"))
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
        .map_err(|_| format!("unknown optimizer '{s}', expected firefly, ga or pso"))
}

fn parse_bound(s: &str) -> Result<BoundOverride, String> {
    let (name, range) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=LO:HI, got '{s}'"))?;
    let index = match name.trim() {
        "a" => 0,
        "b" => 1,
        "c" => 2,
        "d" => 3,
        other => {
            return Err(format!(
                "unknown coefficient '{other}', expected a, b, c or d"
            ))
        }
    };
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{range}'"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    let (lower, upper) = (num(lo)?, num(hi)?);
    if lower.is_nan() || upper.is_nan() || lower >= upper {
        return Err(format!(
            "lower bound {lower} must be below upper bound {upper}"
        ));
    }
    Ok(BoundOverride {
        index,
        lower,
        upper,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => commands::fit(&args),
        Command::Compare(args) => commands::compare(&args),
        Command::Predict(args) => commands::predict(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_syntax() {
        let b = parse_bound("d=-50:50").unwrap();
        assert_eq!((b.index, b.lower, b.upper), (3, -50.0, 50.0));
        assert!(parse_bound("e=0:1").is_err());
        assert!(parse_bound("a=1:0").is_err());
        assert!(parse_bound("a:0:1").is_err());
        assert!(parse_bound("b=x:1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
