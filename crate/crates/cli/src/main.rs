mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frogsel::harness::Metric;
use frogsel::{DistanceMode, SigmaMode};

/// Fuzzy-rough feature selection with a binary shuffled frog leaping search.
#[derive(Debug, Parser)]
#[command(name = "frogsel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search one dataset for minimal reducts with one algorithm.
    Select(SelectArgs),
    /// Evaluate the dependency degree of one feature subset.
    Frdd(FrddArgs),
    /// Write a dataset restricted to a feature subset.
    Reduce(ReduceArgs),
    /// Run a dataset x algorithm x seed grid.
    Bench(BenchArgs),
    /// Friedman test and Li post-hoc on a score matrix.
    Stats(StatsArgs),
    /// Enumerate every subset of a small table and print the optimal frontier.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Csv,
    Arff,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SigmaArg {
    Variance,
    Stddev,
}

impl From<SigmaArg> for SigmaMode {
    fn from(s: SigmaArg) -> Self {
        match s {
            SigmaArg::Variance => SigmaMode::Variance,
            SigmaArg::Stddev => SigmaMode::Stddev,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistanceArg {
    Hamming,
    Posregion,
}

impl From<DistanceArg> for DistanceMode {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Hamming => DistanceMode::Hamming,
            DistanceArg::Posregion => DistanceMode::PosRegion,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Accuracy,
    Fitness,
    Features,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Accuracy => Metric::ProxyAccuracy,
            MetricArg::Fitness => Metric::Fitness,
            MetricArg::Features => Metric::Cardinality,
        }
    }
}

/// How a dataset file is read.
#[derive(Debug, Clone, Args)]
struct TableArgs {
    /// Decision column, by name or zero-based index.
    #[arg(long)]
    class: Option<String>,
    /// Similarity width per real feature.
    #[arg(long, value_enum)]
    sigma: Option<SigmaArg>,
    /// Min-max scale real features before computing sigma.
    #[arg(long, value_enum)]
    normalize: Option<Switch>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    dataset: PathBuf,
    /// bsfla, quickreduct, ga or pso.
    #[arg(long, short, default_value = "bsfla")]
    algorithm: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    distance: Option<DistanceArg>,
    /// Run file with `[bsfla]`, `[ga]` and `[pso]` sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also report 1-NN cross-validated accuracy of the first reduct with this many folds.
    #[arg(long)]
    proxy_folds: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[command(flatten)]
    table: TableArgs,
}

#[derive(Debug, Args)]
struct FrddArgs {
    dataset: PathBuf,
    /// Subset as a bit string, first feature first.
    #[arg(long, conflicts_with = "features")]
    mask: Option<String>,
    /// Subset as comma-separated feature names or indices.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    /// Also compute crisp rough regions (nominal features only).
    #[arg(long)]
    crisp: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[command(flatten)]
    table: TableArgs,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    dataset: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, conflicts_with_all = ["features", "report"])]
    mask: Option<String>,
    #[arg(long, value_delimiter = ',', conflicts_with = "report")]
    features: Vec<String>,
    /// Take the first reduct of a JSON report written by `select`.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Defaults to the output file extension.
    #[arg(long, value_enum)]
    format: Option<ExportFormat>,
    #[command(flatten)]
    table: TableArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    datasets: Vec<PathBuf>,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<String>,
    /// Comma list of seeds and half-open ranges, e.g. `0..5,42`.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    proxy_folds: Option<usize>,
    #[arg(long, value_enum)]
    distance: Option<DistanceArg>,
    /// Print per-algorithm wins on this metric.
    #[arg(long, value_enum)]
    wins: Option<MetricArg>,
    #[command(flatten)]
    table: TableArgs,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// CSV with datasets as rows and algorithms as columns.
    scores: Option<PathBuf>,
    /// Average ranks to test directly instead of a score file.
    #[arg(long, value_delimiter = ',', requires = "datasets", conflicts_with = "scores")]
    ranks: Vec<f64>,
    /// Number of datasets behind `--ranks`.
    #[arg(long)]
    datasets: Option<usize>,
    /// Algorithm names for `--ranks`.
    #[arg(long, value_delimiter = ',')]
    names: Vec<String>,
    /// Control algorithm name; defaults to the best average rank.
    #[arg(long)]
    control: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// error, drop or worst.
    #[arg(long, default_value = "error")]
    missing: String,
    /// Snap rounded `--ranks` onto multiples of 1/(2N).
    #[arg(long)]
    snap: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct OracleArgs {
    dataset: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[command(flatten)]
    table: TableArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Select(a) => commands::select(a),
        Command::Frdd(a) => commands::frdd(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Bench(a) => commands::bench(a),
        Command::Stats(a) => commands::stats(a),
        Command::Oracle(a) => commands::oracle(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
