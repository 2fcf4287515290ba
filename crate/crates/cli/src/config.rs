use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fbm_core::evaluation::{Predictor, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(
    name = "fbm",
    version,
    about = "Missing-link prediction with the fast block probabilistic model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topology statistics of the giant component.
    Stats(RunConfig),
    /// One seeded partition with block kinds and the density matrix.
    Partition(RunConfig),
    /// Score every unlinked pair, highest first.
    Predict(RunConfig),
    /// AUC over repeated train/probe splits.
    Evaluate(RunConfig),
    /// Score ratios on the bundled toy networks.
    Mechanism(RunConfig),
}

impl Command {
    pub fn config(&self) -> &RunConfig {
        match self {
            Command::Stats(c)
            | Command::Partition(c)
            | Command::Predict(c)
            | Command::Evaluate(c)
            | Command::Mechanism(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Edge-list file, or `bundled:<name>` (karate, ring6, mechanism-b,
    /// mechanism-c, demo-blocks).
    #[arg(long)]
    pub input: Option<String>,

    /// Link-density threshold in (0, 1].
    #[arg(long, default_value_t = 1.0, value_parser = parse_threshold, allow_negative_numbers = true)]
    pub threshold: f64,

    /// Partition samples per prediction [default: 50; mechanism: 10000].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    pub samples: Option<u64>,

    /// Fraction of edges held out as probe set, in (0, 1).
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction, allow_negative_numbers = true)]
    pub fraction: f64,

    /// Independent train/probe splits.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    pub repeats: u64,

    #[arg(long, default_value_t = DEFAULT_SEED, allow_negative_numbers = true)]
    pub seed: u64,

    /// fbm, cn, jaccard, aa or ra.
    #[arg(long, default_value = "fbm", value_parser = parse_method)]
    pub method: Predictor,

    /// Evaluate at thresholds 0.1, 0.2, ..., 1.0.
    #[arg(long)]
    pub sweep: bool,

    /// Draw probe edges from intra-community edges only.
    #[arg(long)]
    pub intra: bool,

    /// Worker threads; output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), allow_negative_numbers = true)]
    pub workers: Option<u64>,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if t > 0.0 && t <= 1.0 {
        Ok(t)
    } else {
        Err(format!("{t} is outside (0, 1]"))
    }
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if f > 0.0 && f < 1.0 {
        Ok(f)
    } else {
        Err(format!("{f} is outside (0, 1)"))
    }
}

fn parse_method(s: &str) -> Result<Predictor, String> {
    s.parse().map_err(|e: fbm_core::Error| e.to_string())
}
