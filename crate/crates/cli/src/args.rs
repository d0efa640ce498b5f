use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const OUT_DIR_ENV: &str = "PPMM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "ppmm",
    version,
    about = "Proxy pattern-mixture analysis of nonignorable nonresponse"
)]
pub struct Cli {
    /// Cap on worker threads (0 uses every available core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Repeat for more log output on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce reference microdata to population aggregates.
    Aggregate(AggregateArgs),
    /// ML sensitivity grid and Bayesian posterior for one respondent file.
    Fit(FitArgs),
    /// Generate a synthetic population from a simulation spec.
    Simulate(SimulateArgs),
    /// Repeated simulate-and-fit coverage experiment.
    Coverage(CoverageArgs),
    /// Join per-wave results into a tidy CSV (and optional SVG).
    Plotdata(PlotdataArgs),
    /// Print a starting simulation spec to standard output.
    Template(TemplateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutDir {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McmcArgs {
    #[arg(long, default_value_t = 5000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 500)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AggregateArgs {
    /// Reference (population) microdata CSV.
    #[arg(long)]
    pub microdata: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    /// Overrides the codebook's weight column.
    #[arg(long)]
    pub weight_column: Option<String>,
    /// Use per-covariate marginals only (block-diagonal covariance).
    #[arg(long)]
    pub marginals_only: bool,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Respondent microdata CSV.
    #[arg(long)]
    pub microdata: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    /// Aggregates file written by `ppmm aggregate`.
    #[arg(long)]
    pub aggregates: PathBuf,
    /// Responding fraction of the population.
    #[arg(long)]
    pub pi: f64,
    #[arg(long)]
    pub seed: u64,
    /// Comma-separated φ values. One value also fixes the Bayesian prior at
    /// that value; otherwise the prior is Uniform(0, 1).
    #[arg(long, value_delimiter = ',')]
    pub phi: Option<Vec<f64>>,
    /// Skip the Gibbs sampler.
    #[arg(long)]
    pub ml_only: bool,
    /// Label used to join waves in `plotdata` (defaults to the microdata file stem).
    #[arg(long)]
    pub label: Option<String>,
    #[command(flatten)]
    pub mcmc: McmcArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicyArg {
    TreatAsZero,
    DropRecord,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Simulation spec (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Replaces the spec's seed.
    #[arg(long)]
    pub seed: u64,
    /// Outcome missing-data policy written into the emitted codebook.
    #[arg(long, value_enum, default_value_t = MissingPolicyArg::TreatAsZero)]
    pub missing_y_policy: MissingPolicyArg,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoverageArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub replications: usize,
    /// Base seed; replication r uses seed + r.
    #[arg(long)]
    pub seed: u64,
    /// `uniform` or a fixed value in [0, 1].
    #[arg(long, default_value = "uniform")]
    pub phi_truth: String,
    #[arg(long, value_enum, default_value_t = MissingPolicyArg::TreatAsZero)]
    pub missing_y_policy: MissingPolicyArg,
    #[command(flatten)]
    pub mcmc: McmcArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotdataArgs {
    /// Results JSON files in wave order.
    #[arg(long, required = true, num_args = 1..)]
    pub results: Vec<PathBuf>,
    /// CSV of (label, value) benchmark pairs with a header row.
    #[arg(long)]
    pub benchmark: Option<PathBuf>,
    /// Also render plot.svg.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TemplateArgs {
    /// Target proxy strength; slopes are rescaled to hit it.
    #[arg(long, default_value_t = 0.5)]
    pub proxy_strength: f64,
    #[arg(long, default_value_t = 200_000)]
    pub population_size: usize,
    #[arg(long, default_value_t = 0.07)]
    pub response_rate: f64,
    #[arg(long, default_value_t = 0.5)]
    pub phi_true: f64,
}
