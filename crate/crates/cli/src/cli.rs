//! Command-line grammar.
//!
//! Flag names follow the symbols used for the algorithm parameters (`--mu`,
//! `--tau`, `--c`, `--dup`, `--d`, `--k`, `--gamma`). Every flag's help text
//! starts with its value domain; [`FLAGS`] lists them so a test can check the
//! `--help` output against it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use optia_core::algorithms::{AlgorithmId, Variation};
use optia_core::benchmarks::parse_real;
use optia_core::operators::{AgeLimit, CmMode};

#[derive(Debug, Parser)]
#[command(name = "optia", version, about = "Run, sweep and check Opt-IA runtime experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its per-run records.
    Run(RunArgs),
    /// Run one experiment per problem size and fit the scaling exponent.
    Sweep(SweepArgs),
    /// Monte Carlo check of an operator against its exact distribution.
    VerifyOp(VerifyArgs),
    /// Fit a log-log line to a table of (n, evaluations) points.
    Fit(FitArgs),
    /// Summarise saved results.
    Report(ReportArgs),
}

fn real(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

fn flag01(s: &str) -> Result<bool, String> {
    match s {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        _ => Err(format!("expected 0 or 1, got {s:?}")),
    }
}

/// Algorithm, function and budget flags shared by `run` and `sweep`.
#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// {optia, optia-star, ia-hyp, ea, rls, rls-p-ageing, rls-ageing-div, ea-ageing}
    #[arg(long, value_name = "ALGO")]
    pub algo: AlgorithmId,
    /// {onemax, zeromax, leadingones, jump, cliff, simpletrap, hiddenpath, hypertrap}
    #[arg(long, value_name = "NAME")]
    pub function: String,
    /// integer >= 1; fitness evaluations allowed per run
    #[arg(long)]
    pub budget: u64,
    /// integer >= 1; independent runs
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// integer in [0, 2^64); master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// integer >= 1; population size
    #[arg(long)]
    pub mu: Option<usize>,
    /// integer >= 1; clones per individual
    #[arg(long)]
    pub dup: Option<usize>,
    /// real in (0, 1]; mutation potential factor, M = ceil(c n)
    #[arg(long, value_parser = real)]
    pub c: Option<f64>,
    /// integer >= 0 or inf; age threshold
    #[arg(long)]
    pub tau: Option<AgeLimit>,
    /// real in [0, 1/2); copy probability of rls-p-ageing
    #[arg(long, value_parser = real)]
    pub p: Option<f64>,
    /// {0, 1}; discard offspring duplicating a parent genotype
    #[arg(long, value_parser = flag01)]
    pub div: Option<bool>,
    /// integer in [1, n]; jump gap length
    #[arg(long)]
    pub k: Option<usize>,
    /// integer in [1, n]; cliff distance from the optimum
    #[arg(long)]
    pub d: Option<usize>,
    /// real in (0, 1/8], e.g. 1/8; hypertrap distance factor [default: 1/8]
    #[arg(long, value_parser = real)]
    pub gamma: Option<f64>,
    /// real in (0, 1); hiddenpath slope [default: 0.5]
    #[arg(long, value_parser = real)]
    pub epsilon: Option<f64>,
    /// {none, strict, nonstrict}; when a hypermutation walk stops
    #[arg(long, value_name = "MODE")]
    pub cm_mode: Option<CmMode>,
    /// {hypermutation, sbm}; variation operator of optia
    #[arg(long, value_name = "OP")]
    pub variation: Option<Variation>,
    /// integer >= 1; worker threads (never changes results)
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// integer >= 1; problem size
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// path; .csv writes records, .json the full result, anything else both
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// comma-separated integers >= 1, at least 3 sizes
    #[arg(long, value_name = "N,N,N", value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// path prefix; writes <out>.tsv and <out>.json
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Hypermutation,
    Ageing,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// {hypermutation, ageing}
    #[arg(long, value_enum)]
    pub which: Which,
    /// integer >= 1; bit-string length (hypermutation)
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// integer in [1, n]; target distance (hypermutation)
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// integer >= 1; Monte Carlo samples (hypermutation)
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// integer >= 1; population size (ageing)
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    /// integer >= 1; ageing trials (ageing)
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// integer in [0, 2^64); random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// path; table whose first two numeric columns are n and evaluations
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// path, repeatable; result JSON from run or sweep, or a run CSV
    #[arg(long = "in", value_name = "PATH", required = true)]
    pub inputs: Vec<PathBuf>,
    /// path; also write the table here
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Every long flag per subcommand, with the domain its help text states.
pub const FLAGS: &[(&str, &str, &str)] = &[
    ("run", "--n", "integer >= 1"),
    ("run", "--algo", "{optia, optia-star, ia-hyp, ea, rls, rls-p-ageing, rls-ageing-div, ea-ageing}"),
    ("run", "--function", "{onemax, zeromax, leadingones, jump, cliff, simpletrap, hiddenpath, hypertrap}"),
    ("run", "--budget", "integer >= 1"),
    ("run", "--runs", "integer >= 1"),
    ("run", "--seed", "integer in [0, 2^64)"),
    ("run", "--mu", "integer >= 1"),
    ("run", "--dup", "integer >= 1"),
    ("run", "--c", "real in (0, 1]"),
    ("run", "--tau", "integer >= 0 or inf"),
    ("run", "--p", "real in [0, 1/2)"),
    ("run", "--div", "{0, 1}"),
    ("run", "--k", "integer in [1, n]"),
    ("run", "--d", "integer in [1, n]"),
    ("run", "--gamma", "real in (0, 1/8]"),
    ("run", "--epsilon", "real in (0, 1)"),
    ("run", "--cm-mode", "{none, strict, nonstrict}"),
    ("run", "--variation", "{hypermutation, sbm}"),
    ("run", "--parallelism", "integer >= 1"),
    ("run", "--out", "path"),
    ("sweep", "--n-list", "comma-separated integers >= 1"),
    ("sweep", "--algo", "{optia, optia-star, ia-hyp, ea, rls, rls-p-ageing, rls-ageing-div, ea-ageing}"),
    ("sweep", "--function", "{onemax, zeromax, leadingones, jump, cliff, simpletrap, hiddenpath, hypertrap}"),
    ("sweep", "--budget", "integer >= 1"),
    ("sweep", "--runs", "integer >= 1"),
    ("sweep", "--seed", "integer in [0, 2^64)"),
    ("sweep", "--mu", "integer >= 1"),
    ("sweep", "--dup", "integer >= 1"),
    ("sweep", "--c", "real in (0, 1]"),
    ("sweep", "--tau", "integer >= 0 or inf"),
    ("sweep", "--p", "real in [0, 1/2)"),
    ("sweep", "--div", "{0, 1}"),
    ("sweep", "--k", "integer in [1, n]"),
    ("sweep", "--d", "integer in [1, n]"),
    ("sweep", "--gamma", "real in (0, 1/8]"),
    ("sweep", "--epsilon", "real in (0, 1)"),
    ("sweep", "--cm-mode", "{none, strict, nonstrict}"),
    ("sweep", "--variation", "{hypermutation, sbm}"),
    ("sweep", "--parallelism", "integer >= 1"),
    ("sweep", "--out", "path prefix"),
    ("verify-op", "--which", "{hypermutation, ageing}"),
    ("verify-op", "--n", "integer >= 1"),
    ("verify-op", "--k", "integer in [1, n]"),
    ("verify-op", "--samples", "integer >= 1"),
    ("verify-op", "--mu", "integer >= 1"),
    ("verify-op", "--trials", "integer >= 1"),
    ("verify-op", "--seed", "integer in [0, 2^64)"),
    ("fit", "--in", "path"),
    ("report", "--in", "path, repeatable"),
    ("report", "--out", "path"),
];
