//! Opt-IA and the baseline search heuristics it is compared against, the
//! pseudo-Boolean benchmarks they run on, and the experiment harness.
//!
//! Runtime is counted in fitness evaluations. A run stops on the first
//! evaluation of an optimum or when its evaluation budget is spent.

pub mod algorithms;
pub mod analysis;
pub mod benchmarks;
pub mod bitstring;
pub mod error;
pub mod eval;
pub mod harness;
pub mod operators;
pub mod rng;

pub use algorithms::{run, run_with_population, AlgorithmConfig, AlgorithmId, RunRecord, Variation};
pub use analysis::{fit_loglog, summarize, AnalysisError, ScalingFit, SummaryStats};
pub use benchmarks::Benchmark;
pub use bitstring::BitString;
pub use error::{ConfigError, ParseError, ResultsError};
pub use eval::{EvaluationCounter, Evaluator, FitnessOracle, Stop};
pub use harness::{run_experiment, ExperimentConfig, ExperimentResult};
pub use operators::{AgeLimit, CmMode, Individual};
pub use rng::RngStream;
