//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

#[derive(Parser, Debug)]
#[command(
    name = "nicepair",
    version,
    about = "Exact classifier for rank/degree pairs of stable-bundle moduli: \
             reduction chains, nice/fine verdicts with witnesses, and the \
             linear-algebra genericity and stability checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full classification report for one pair
    Classify(PairQuery),
    /// Reduction chain for one pair under a step policy
    Chain(ChainArgs),
    /// Stream reports for every lattice point up to a rank bound
    Enumerate(EnumerateArgs),
    /// Fine-pair verdict with its zig-zag witness diagram
    Fine(PairQuery),
    /// All one-step predecessors of a pair, for both step kinds
    Predecessors(PredecessorsArgs),
    /// GIT stability of projective point configurations from CSV
    Stability(StabilityArgs),
    /// Conditions A and B and the coefficient identity on matrices
    Condition(ConditionArgs),
    /// Run the full cross-check suite; nonzero exit on any violation
    Verify(VerifyArgs),
}

/// A rank/degree argument: `n,d`, `n;d`, or `(n;d)`.
#[derive(Clone, Debug)]
pub struct PairArg {
    pub n: BigInt,
    pub d: BigInt,
}

pub fn parse_pair_arg(raw: &str) -> Result<PairArg, String> {
    let trimmed = raw.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = trimmed.split([',', ';']).collect();
    if parts.len() != 2 {
        return Err(format!("expected `n,d`, got `{raw}`"));
    }
    let n: BigInt = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad rank `{}`", parts[0]))?;
    let d: BigInt = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad degree `{}`", parts[1]))?;
    Ok(PairArg { n, d })
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct PairQuery {
    /// Genus of the curve (>= 2)
    #[arg(long)]
    pub genus: BigInt,
    /// The pair, e.g. `15,77`
    #[arg(long, value_parser = parse_pair_arg)]
    pub pair: PairArg,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum ChainPolicy {
    /// Shortest witness chain to (1;g), if the pair is nice
    #[default]
    Nice,
    /// Apply reductions only, until the window is left
    Reduce,
    /// Apply dual reductions only, until the window is left
    Dual,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub genus: BigInt,
    #[arg(long, value_parser = parse_pair_arg)]
    pub pair: PairArg,
    #[arg(long, value_enum, default_value_t)]
    pub policy: ChainPolicy,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub genus: BigInt,
    /// Largest rank to include
    #[arg(long = "n-max")]
    pub n_max: BigInt,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct PredecessorsArgs {
    #[arg(long)]
    pub genus: BigInt,
    /// The step target whose predecessors are wanted
    #[arg(long, value_parser = parse_pair_arg)]
    pub pair: PairArg,
    /// Largest predecessor rank to report
    #[arg(long = "n-max")]
    pub n_max: BigInt,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    /// Dimension n of the ambient projective space P_n
    #[arg(long)]
    pub ambient: usize,
    /// CSV file: one point per row (n+1 exact rational coordinates);
    /// blank lines separate multiple configurations
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum ConditionCheck {
    A,
    B,
    #[default]
    Both,
}

#[derive(Args, Debug)]
pub struct ConditionArgs {
    /// CSV file with one matrix (phi) or two blank-line-separated
    /// matrices (omega, then phi)
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub check: ConditionCheck,
    /// Sample random transformations against a generic omega instead of
    /// checking given matrices
    #[arg(long)]
    pub sample: bool,
    /// Number of sampled transformations
    #[arg(long, default_value_t = 500)]
    pub trials: u32,
    /// Seed for deterministic sampling
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Rows of the generated omega (needed for --sample without --input)
    #[arg(long)]
    pub genus: Option<usize>,
    /// Column blocks of the generated omega
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Use reduced bounds for a fast smoke run
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = 2)]
    pub genus_min: u64,
    #[arg(long, default_value_t = 7)]
    pub genus_max: u64,
    #[arg(long = "n-max", default_value_t = 12)]
    pub sweep_n_max: u64,
    #[arg(long, default_value_t = 10)]
    pub predecessor_n_max: u64,
    #[arg(long, default_value_t = 10_000)]
    pub chain_walks: u32,
    #[arg(long, default_value_t = 1)]
    pub chain_seed: u64,
    #[arg(long, default_value_t = 50)]
    pub dimension_max: u64,
    #[arg(long, default_value_t = 500)]
    pub condition_b_cases: u32,
    #[arg(long, default_value_t = 200)]
    pub stability_cases: u32,
    #[arg(long, default_value_t = 100)]
    pub identity_cases: u32,
    #[arg(long, default_value_t = 500)]
    pub sample_trials: u32,
    #[arg(long, default_value_t = 1)]
    pub sample_seed: u64,
    #[arg(long, default_value_t = 1)]
    pub oracle_seed: u64,
}
