use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

#[derive(Debug, Parser)]
#[command(
    name = "disco",
    version,
    about = "Discrepancy-based sensitivity analysis toolkit",
    args_override_self = true
)]
pub struct Cli {
    /// JSON file whose keys mirror the command-line flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random or Sobol' design and write it as CSV.
    Sample(SampleArgs),
    /// Score a CSV point set with one or all discrepancy measures.
    Discrepancy(DiscrepancyArgs),
    /// Rank inputs by discrepancy importance (and optionally Jansen indices).
    Sensitivity(SensitivityArgs),
    /// Run, replay or analyze the randomized benchmark.
    #[command(subcommand)]
    Benchmark(BenchmarkCommand),
    /// Time every measure and fit complexity slopes.
    Timing(TimingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Random,
    Sobol,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Method::Sobol)]
    pub method: Method,
    /// Number of points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Number of dimensions.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub d: u64,
    #[arg(long, env = "DISCO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Owen-scramble the Sobol' points.
    #[arg(long)]
    pub scramble: bool,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw the first two columns as an SVG scatter with the S-ersatz grid.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    /// Headerless CSV of points in [0, 1].
    pub points: PathBuf,
    /// A measure name or `all`.
    #[arg(long, default_value = "all")]
    pub measure: String,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    /// Unit-cube inputs, one run per row.
    #[arg(long)]
    pub inputs: PathBuf,
    /// Model outputs, one value per row, aligned with `--inputs`.
    #[arg(long)]
    pub outputs: PathBuf,
    /// A measure name or `all`.
    #[arg(long, default_value = "all")]
    pub measure: String,
    /// Outputs of a Jansen-layout design (A, A_B1, .., A_Bd) to add total-order indices.
    #[arg(long, requires = "n_base")]
    pub jansen: Option<PathBuf>,
    /// Base sample size of the Jansen design.
    #[arg(long, requires = "jansen", value_parser = clap::value_parser!(u64).range(2..))]
    pub n_base: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BenchmarkCommand {
    /// Run simulations and write one row per (simulation, measure).
    Run(RunArgs),
    /// Summarize a results file and run pairwise Mood median tests.
    Analyze(AnalyzeArgs),
    /// Same as the top-level `timing` command.
    Timing(TimingArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = disco_core::benchmark::DESK_SCALE_SIMS as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub sims: u64,
    #[arg(long, env = "DISCO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of processors.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[arg(long, conflicts_with = "replay")]
    pub out: Option<PathBuf>,
    /// Rerun one simulation and print its provenance as JSON.
    #[arg(long, value_name = "SIM_ID")]
    pub replay: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub results: PathBuf,
    /// Summary CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mood p-value matrix CSV; appended to standard output when omitted.
    #[arg(long)]
    pub mood_out: Option<PathBuf>,
    /// Box plot of the r distributions.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Small grid with 5 repetitions.
    #[arg(long)]
    pub quick: bool,
    /// Timed repetitions per cell (at least 5).
    #[arg(long, value_parser = clap::value_parser!(u64).range(5..))]
    pub reps: Option<u64>,
    /// Log-log plot of the timings.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

const SUBCOMMANDS: [&str; 7] = ["sample", "discrepancy", "sensitivity", "benchmark", "run", "analyze", "timing"];

/// Splices flags from a `--config` JSON file into `argv` right after the
/// subcommand path, ahead of the user's own flags so that those win.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            config = iter.next();
            if config.is_none() {
                return Err("--config needs a file path".into());
            }
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("config {path}: expected a JSON object"));
    };
    let mut injected = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => injected.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => injected.extend([flag, s]),
            Value::Number(n) => injected.extend([flag, n.to_string()]),
            other => return Err(format!("config key '{key}': unsupported value {other}")),
        }
    }
    let split = 1 + rest
        .iter()
        .skip(1)
        .take_while(|a| SUBCOMMANDS.contains(&a.as_str()))
        .count();
    let mut out: Vec<String> = rest[..split].to_vec();
    out.extend(injected);
    out.extend_from_slice(&rest[split..]);
    Ok(out)
}
