use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "domcon", version, about = "Exact checks for dominated positive contractions on weighted l1 spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for randomized subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write `<subcommand>.json` and `<subcommand>.csv` here instead of printing to stdout.
    #[arg(long, global = true, env = "DOMCON_OUT_DIR", value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Format printed to stdout when no output directory is set.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest power n for which d(n) is computed.
    #[arg(long, global = true, value_name = "N")]
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact norms, dominance and the separation sequence of a user pair.
    Norms(NormsArgs),
    /// The parametric 2x2 example: closed forms against the engine.
    Example(ExampleArgs),
    /// Randomized campaign over dominated pairs.
    Verify(VerifyArgs),
    /// Randomized search for lp pairs where separation is lost again.
    SearchLp(SearchArgs),
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    /// Matrix file for S.
    #[arg(long, short = 's', value_name = "FILE")]
    pub s: PathBuf,
    /// Matrix file for T.
    #[arg(long, short = 't', value_name = "FILE")]
    pub t: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// Use A = C = 1/2, B = D = 1/3, lambda = 1/4.
    #[arg(long, conflicts_with_all = ["a", "b", "c", "d", "lambda", "sweep_steps"])]
    pub paper_instance: bool,
    #[arg(short = 'A', long = "a", value_name = "P/Q", allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(short = 'B', long = "b", value_name = "P/Q", allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(short = 'C', long = "c", value_name = "P/Q", allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(short = 'D', long = "d", value_name = "P/Q", allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Evaluate n0 for every valid parameter set on the grid {0, 1/K, ..., 1}.
    #[arg(long, value_name = "K", conflicts_with_all = ["a", "b", "c", "d", "lambda"])]
    pub sweep_steps: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Campaign configuration as JSON; flags override its fields.
    #[arg(long, value_name = "FILE", conflicts_with = "from_manifest")]
    pub config: Option<PathBuf>,
    /// Rerun the campaign recorded in a previous report.
    #[arg(long, value_name = "REPORT")]
    pub from_manifest: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub dim_min: Option<usize>,
    #[arg(long)]
    pub dim_max: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub magnitude_grid: Option<u32>,
    #[arg(long)]
    pub stochastic_fraction: Option<f64>,
    #[arg(long)]
    pub null_t_fraction: Option<f64>,
    #[arg(long)]
    pub random_weights: bool,
    /// Keep each trial's exact d sequence in the report.
    #[arg(long)]
    pub include_sequences: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_name = "FILE", conflicts_with = "from_manifest")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "REPORT")]
    pub from_manifest: Option<PathBuf>,
    /// Comma-separated exponents, each > 1.
    #[arg(long = "p", value_delimiter = ',', value_name = "P,...")]
    pub ps: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub dim_min: Option<usize>,
    #[arg(long)]
    pub dim_max: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub margin_tol: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
}
