//! Multi-run experiments and result persistence.
//!
//! Run `i` of an experiment is seeded with `derive_seed(master_seed, i)` and
//! results are gathered in run order, so an experiment's output does not
//! depend on how many worker threads executed it.
//!
//! Two file formats are written: a flat CSV with one row per run, and a JSON
//! envelope `{config, records}` that carries everything needed to reproduce
//! the experiment.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run, AlgorithmConfig, RunRecord};
use crate::benchmarks::Benchmark;
use crate::error::{ConfigError, ResultsError};
use crate::rng::derive_seed;

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmConfig,
    pub benchmark: Benchmark,
    pub budget: u64,
    pub runs: usize,
    pub master_seed: u64,
    /// Worker threads. Not persisted: it cannot change any result.
    #[serde(skip, default = "one")]
    pub parallelism: usize,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmConfig, benchmark: Benchmark, budget: u64, runs: usize, master_seed: u64) -> Self {
        Self {
            algorithm,
            benchmark,
            budget,
            runs,
            master_seed,
            parallelism: 1,
        }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.runs == 0 {
            return Err(ConfigError::range("runs", "runs must be at least 1"));
        }
        if self.budget == 0 {
            return Err(ConfigError::range("budget", "budget must be positive"));
        }
        if self.parallelism == 0 {
            return Err(ConfigError::range("parallelism", "parallelism must be at least 1"));
        }
        self.algorithm.validate(&self.benchmark)
    }

    pub fn seed_of(&self, run_index: usize) -> u64 {
        derive_seed(self.master_seed, run_index as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// One record per run, in run order.
    pub records: Vec<RunRecord>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, ConfigError> {
    config.validate()?;
    let one_run = |i: usize| {
        run(&config.algorithm, &config.benchmark, config.budget, config.seed_of(i))
            .expect("configuration was validated")
    };
    let records = if config.parallelism == 1 {
        (0..config.runs).map(one_run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallelism)
            .build()
            .expect("failed to start worker threads");
        pool.install(|| (0..config.runs).into_par_iter().map(one_run).collect())
    };
    Ok(ExperimentResult {
        config: config.clone(),
        records,
    })
}

/// CSV row layout.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    run_index: usize,
    seed: u64,
    success: bool,
    evaluations_used: u64,
    generations: u64,
    best_fitness: f64,
}

pub const CSV_HEADER: &str = "run_index,seed,success,evaluations_used,generations,best_fitness";

fn io_err(path: &Path, source: std::io::Error) -> ResultsError {
    ResultsError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (run_index, r) in records.iter().enumerate() {
        w.serialize(CsvRow {
            run_index,
            seed: r.seed,
            success: r.success,
            evaluations_used: r.evaluations_used,
            generations: r.generations,
            best_fitness: r.best_fitness,
        })
        .expect("serialising to memory cannot fail");
    }
    if records.is_empty() {
        return format!("{CSV_HEADER}\n");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

pub fn result_to_json(result: &ExperimentResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("results serialise");
    s.push('\n');
    s
}

/// Writes `result` to `path`: CSV when the extension is `.csv`, the JSON
/// envelope otherwise.
pub fn save_results(result: &ExperimentResult, path: &Path) -> Result<(), ResultsError> {
    let body = if is_csv(path) {
        records_to_csv(&result.records)
    } else {
        result_to_json(result)
    };
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(body.as_bytes()).map_err(|e| io_err(path, e))
}

/// Loads a JSON envelope written by [`save_results`].
pub fn load_results(path: &Path) -> Result<ExperimentResult, ResultsError> {
    if is_csv(path) {
        return Err(ResultsError::Format {
            path: path.to_path_buf(),
            message: "CSV files hold records only; load them with load_records_csv".into(),
        });
    }
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_results_json(&text, path)
}

pub fn parse_results_json(text: &str, path: &Path) -> Result<ExperimentResult, ResultsError> {
    let result: ExperimentResult = serde_json::from_str(text).map_err(|e| ResultsError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if result.records.len() != result.config.runs {
        return Err(ResultsError::Format {
            path: path.to_path_buf(),
            message: format!(
                "config declares {} runs but {} records are present",
                result.config.runs,
                result.records.len()
            ),
        });
    }
    Ok(result)
}

/// Loads the records of a CSV file written by [`save_results`].
pub fn load_records_csv(path: &Path) -> Result<Vec<RunRecord>, ResultsError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_records_csv(&text, path)
}

pub fn parse_records_csv(text: &str, path: &Path) -> Result<Vec<RunRecord>, ResultsError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header_ok = reader
        .headers()
        .map(|h| h.iter().collect::<Vec<_>>().join(",") == CSV_HEADER)
        .unwrap_or(false);
    if !header_ok {
        return Err(ResultsError::Csv {
            path: path.to_path_buf(),
            line: 1,
            field: "header".into(),
            message: format!("expected header {CSV_HEADER:?}"),
        });
    }
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(i as u64 + 2);
            let field = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err
                    .field()
                    .and_then(|f| CSV_HEADER.split(',').nth(f as usize))
                    .unwrap_or("?")
                    .to_string(),
                csv::ErrorKind::UnequalLengths { .. } => "row length".to_string(),
                _ => "?".to_string(),
            };
            ResultsError::Csv {
                path: path.to_path_buf(),
                line,
                field,
                message: e.to_string(),
            }
        })?;
        if row.run_index != i {
            return Err(ResultsError::Csv {
                path: path.to_path_buf(),
                line: i as u64 + 2,
                field: "run_index".into(),
                message: format!("expected run_index {i}, found {}", row.run_index),
            });
        }
        records.push(RunRecord {
            seed: row.seed,
            success: row.success,
            evaluations_used: row.evaluations_used,
            generations: row.generations,
            best_fitness: row.best_fitness,
        });
    }
    Ok(records)
}

/// `<prefix>.csv` and `<prefix>.json`.
pub fn output_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    (prefix.with_extension("csv"), prefix.with_extension("json"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{AgeLimit, CmMode};

    fn small() -> ExperimentConfig {
        ExperimentConfig::new(
            AlgorithmConfig::ia_hyp(1.0, CmMode::Strict),
            Benchmark::OneMax { n: 20 },
            1_000_000,
            12,
            7,
        )
    }

    #[test]
    fn single_run_matches_direct_call() {
        let mut cfg = small();
        cfg.runs = 1;
        let res = run_experiment(&cfg).unwrap();
        let direct = run(&cfg.algorithm, &cfg.benchmark, cfg.budget, derive_seed(7, 0)).unwrap();
        assert_eq!(res.records, vec![direct]);
    }

    #[test]
    fn parallelism_does_not_change_output() {
        let a = run_experiment(&small()).unwrap();
        let b = run_experiment(&small().with_parallelism(4)).unwrap();
        assert_eq!(result_to_json(&a), result_to_json(&b));
        assert_eq!(records_to_csv(&a.records), records_to_csv(&b.records));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = small();
        cfg.runs = 0;
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = small();
        cfg.benchmark = Benchmark::Jump { n: 20, k: 0 };
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn json_round_trip_and_truncation() {
        let cfg = ExperimentConfig::new(
            AlgorithmConfig::opt_ia(2, 1, 1.0, AgeLimit::Bounded(400)),
            Benchmark::Cliff { n: 16, d: 3 },
            20_000,
            5,
            3,
        );
        let res = run_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        save_results(&res, &path).unwrap();
        assert_eq!(load_results(&path).unwrap(), res);

        let text = fs::read_to_string(&path).unwrap();
        let cut = &text[..text.len() / 2];
        let err = parse_results_json(cut, &path).unwrap_err();
        assert!(matches!(err, ResultsError::Json { .. }), "{err}");
        assert!(err.to_string().contains("r.json:"));
    }

    #[test]
    fn csv_layout_and_errors() {
        let res = run_experiment(&small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        save_results(&res, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 12 + 1);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(load_records_csv(&path).unwrap(), res.records);

        let bad = text.replacen("true", "maybe", 1);
        let err = parse_records_csv(&bad, &path).unwrap_err();
        match err {
            ResultsError::Csv { field, line, .. } => {
                assert_eq!(field, "success");
                assert!(line >= 2);
            }
            other => panic!("unexpected {other}"),
        }
        let truncated: String = text.lines().take(3).map(|l| format!("{l}\n")).collect::<String>() + "3,17";
        assert!(parse_records_csv(&truncated, &path).is_err());
        assert!(load_results(&path).is_err());
    }
}
