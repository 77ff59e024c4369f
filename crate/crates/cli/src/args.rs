use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "boolcv",
    version,
    about = "Cross-validation error and instability of k-NN voting on noisy boolean data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a dataset y = f(X) xor z and write it out.
    Generate(GenerateArgs),
    /// Emit the closed-form error and instability curves over p.
    Curves(CurvesArgs),
    /// Run the theorem check battery.
    Verify(VerifyArgs),
    /// Pick k and t from training data alone.
    Select(SelectArgs),
    /// Expected error lengths for the reference models and m_k.
    Analyze(AnalyzeArgs),
    /// Dump per-row t_i and r_i.
    Estimate(EstimateArgs),
}

/// Where the inputs and outputs come from: a dataset file or a generator.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Dataset file (comma-separated 0/1 rows, output last).
    #[arg(long, conflicts_with_all = ["family", "r", "n"], required_unless_present = "family")]
    pub dataset: Option<PathBuf>,
    /// Generator target: constant0, constant1, projection<j>, parity, majority,
    /// random<seed>, balanced-chain, constant-chain or mixed-chain.
    #[arg(long)]
    pub family: Option<String>,
    /// Input width for function families.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of rows; defaults to 2^r for function families.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Noise rate.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FaultArg {
    /// Negate every vote of the voting models.
    InvertVote,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Monte Carlo trials per check.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Break the voting models on purpose; the battery should notice.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
    /// CSV report; the summary always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EstimateP {
    /// Median over rows of min(t_i, 1 - t_i) at k = 3.
    Heuristic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    #[value(name = "theorem2_bound")]
    Theorem2Bound,
    #[value(name = "theorem3_independent")]
    Theorem3Independent,
}

#[derive(Args, Debug)]
pub struct SelectArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Noise rate. Required unless --estimate-p is given.
    #[arg(long, required_unless_present = "estimate_p", conflicts_with = "estimate_p")]
    pub p: Option<f64>,
    #[arg(long, value_enum)]
    pub estimate_p: Option<EstimateP>,
    /// Comma-separated k values; default odd k up to min(25, n).
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,
    /// Comma-separated thresholds; default 0.5.
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "theorem3_independent")]
    pub rule: RuleArg,
    /// Seed of the generator draw (ignored for --dataset).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated k values of the voting models.
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    pub k_grid: Vec<usize>,
    /// Vote threshold of the voting models.
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
