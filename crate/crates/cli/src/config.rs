//! Command-line configuration. Every numeric parameter is capped; exceeding
//! a cap is an error rather than a silent truncation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use displace_core::Rational;

use crate::report::Format;
use crate::CliError;

pub const MAX_RADIUS: usize = 14;
pub const MAX_SAMPLES: usize = 1_000_000;
pub const MAX_DIMENSION: usize = 6;
pub const MAX_POWER_LOG2: u32 = 40;
pub const MAX_GRID: usize = 1 << 16;

#[derive(Debug, Clone, Parser)]
#[command(name = "displace", version, about = "Displacement, word-metric and root-depth experiments")]
pub struct ExperimentConfig {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Ball radius (word balls in F₂ or Cayley-graph balls in SL(n, Z)).
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Hyperbolicity constant δ as an exact rational, e.g. `0` or `1/2`.
    #[arg(long, global = true)]
    pub delta: Option<Rational>,
    /// Seed for the ChaCha8 generator; required by randomized experiments.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path; written atomically. Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    /// Cap on the number of elements in a Cayley-graph ball.
    #[arg(long, global = true)]
    pub max_ball: Option<usize>,
    /// Entry bound for the brute-force root search.
    #[arg(long, global = true)]
    pub box_bound: Option<i64>,
    /// Embed wall-clock time in the report (breaks byte-identical re-runs).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exhaustive check of ||g|| ≤ 3·max([g]∞, [gu]∞, [gv]∞) + α over a ball of F₂.
    Prop422(Prop422Args),
    /// Displacement versus translation length for powers of a unipotent element.
    Prop507(Prop507Args),
    /// Gap between Cartan and Jordan projections of sampled proximal matrices.
    AmsGap(AmsGapArgs),
    /// Root-depth certificates for a list of integer matrices.
    DepthRoots(DepthRootsArgs),
    /// Certify a ping-pong pair or search for one.
    Pingpong(PingPongArgs),
    /// Contortion witness through the smallest separating prime.
    Contortion(ContortionArgs),
    /// Ad-hoc word algebra in a free group.
    Word(WordArgs),
    /// Ad-hoc Cartan/Jordan projections of a real matrix.
    Matgeo(MatGeoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Prop422Args {
    #[arg(long, default_value = "aab")]
    pub u: String,
    #[arg(long, default_value = "bba")]
    pub v: String,
    /// Negative-control hook: replaces α in the bound.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub alpha_override: Option<Rational>,
}

#[derive(Debug, Clone, Args)]
pub struct Prop507Args {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Largest power; powers run over 1, 2, 4, … up to this value.
    #[arg(long, default_value_t = 1 << 20)]
    pub power_max: u64,
    /// Negative control: use [[2,1],[1,1]] padded to dimension n.
    #[arg(long)]
    pub control: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    /// `k₁·exp(a)·k₂` with Haar rotations.
    Kak,
    /// Positive diagonal matrices.
    Diagonal,
    /// Uniform entries rescaled to determinant one.
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct AmsGapArgs {
    #[arg(long, default_value_t = 2)]
    pub dimension: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Sampler::Kak)]
    pub sampler: Sampler,
    /// Spread of the log singular values of sampled matrices.
    #[arg(long, default_value_t = 5.0)]
    pub max_log: f64,
    /// Points of P(Rⁿ) tested per proximality certificate.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Asserted bound on the gap; defaults to the calibrated constant.
    #[arg(long)]
    pub gap_bound: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DepthRootsArgs {
    /// One JSON matrix per line; `#` starts a comment line.
    pub matrix_file: PathBuf,
    /// Cap on box-search candidates per matrix.
    #[arg(long, default_value_t = displace_core::zlattice::DEFAULT_ROOT_CANDIDATES)]
    pub max_candidates: u128,
}

#[derive(Debug, Clone, Args)]
pub struct PingPongArgs {
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub v: Option<String>,
    /// Search `(f^N, a f^N a⁻¹)` for the least certifying `N`.
    #[arg(long)]
    pub find: Option<String>,
    #[arg(long, default_value = "b")]
    pub a: String,
    #[arg(long, default_value_t = 64)]
    pub n_max: u32,
}

#[derive(Debug, Clone, Args)]
pub struct ContortionArgs {
    /// JSON integer matrix.
    #[arg(long)]
    pub gamma: String,
    /// JSON array of integer matrices.
    #[arg(long)]
    pub reps: String,
    #[arg(long, default_value_t = displace_core::zlattice::DEFAULT_PRIME_CAP)]
    pub prime_cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordOp {
    Reduce,
    Inverse,
    Multiply,
    Cyclic,
    Gromov,
    Acr,
    Power,
}

#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    #[arg(value_enum)]
    pub op: WordOp,
    /// Words over a..z (inverses A..Z); `e` or an empty string is the identity.
    /// `power` takes a word and an integer.
    #[arg(allow_negative_numbers = true)]
    pub args: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub rank: u8,
}

#[derive(Debug, Clone, Args)]
pub struct MatGeoArgs {
    /// JSON real matrix; entries may be integers, decimals or "p/q".
    #[arg(long)]
    pub matrix: String,
    /// Also report μ(g^m)/m for this m.
    #[arg(long)]
    pub power: Option<u64>,
    /// Attempt an (r, ε)-proximality certificate.
    #[arg(long, requires = "epsilon")]
    pub r: Option<f64>,
    #[arg(long, requires = "r")]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
}

impl CommonArgs {
    pub fn radius_or(&self, default: usize) -> Result<usize, CliError> {
        let r = self.radius.unwrap_or(default);
        if r > MAX_RADIUS {
            return Err(CliError::Config(format!("radius {r} exceeds cap {MAX_RADIUS}")));
        }
        Ok(r)
    }

    pub fn delta_or_zero(&self) -> Result<Rational, CliError> {
        let d = self.delta.unwrap_or_default();
        if d < Rational::from(0) {
            return Err(CliError::Config("delta must be non-negative".into()));
        }
        Ok(d)
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Config("--seed is required for randomized experiments".into()))
    }

    /// Rejects flags that the chosen experiment does not read.
    pub fn reject(&self, experiment: &str, unused: &[&str]) -> Result<(), CliError> {
        for &flag in unused {
            let set = match flag {
                "radius" => self.radius.is_some(),
                "delta" => self.delta.is_some(),
                "seed" => self.seed.is_some(),
                "max-ball" => self.max_ball.is_some(),
                "box-bound" => self.box_bound.is_some(),
                _ => false,
            };
            if set {
                return Err(CliError::Config(format!("--{flag} is not used by {experiment}")));
            }
        }
        Ok(())
    }
}

pub fn check_samples(samples: usize) -> Result<(), CliError> {
    if samples > MAX_SAMPLES {
        return Err(CliError::Config(format!("samples {samples} exceed cap {MAX_SAMPLES}")));
    }
    Ok(())
}

pub fn check_dimension(n: usize, min: usize) -> Result<(), CliError> {
    if !(min..=MAX_DIMENSION).contains(&n) {
        return Err(CliError::Config(format!("dimension {n} outside {min}..={MAX_DIMENSION}")));
    }
    Ok(())
}

pub fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid == 0 || grid > MAX_GRID {
        return Err(CliError::Config(format!("grid {grid} outside 1..={MAX_GRID}")));
    }
    Ok(())
}
