use std::fs;
use std::path::{Path, PathBuf};

use optia_core::algorithms::{AlgorithmConfig, RunRecord};
use optia_core::analysis::{
    fit_loglog, summarize, sweep_table, verify_ageing_survivors, verify_hypermutation_distribution, SummaryStats,
    SweepRow,
};
use optia_core::benchmarks::{Benchmark, DEFAULT_EPSILON, DEFAULT_GAMMA};
use optia_core::harness::{
    load_records_csv, parse_results_json, records_to_csv, result_to_json, run_experiment, ExperimentConfig,
    ExperimentResult,
};
use optia_core::rng::RngStream;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cli::{ExperimentArgs, FitArgs, ReportArgs, RunArgs, SweepArgs, VerifyArgs, Which};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn invalid(msg: impl ToString) -> CliError {
    CliError::Validation(msg.to_string())
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Rejects parameters that the chosen function does not take.
fn unused(flag: &str, value: bool, function: &str) -> Result<(), CliError> {
    if value {
        Err(invalid(format!("--{flag} does not apply to {function}")))
    } else {
        Ok(())
    }
}

pub fn benchmark(args: &ExperimentArgs, n: usize) -> Result<Benchmark, CliError> {
    let name = args.function.to_ascii_lowercase();
    let need = |flag: &str, v: Option<usize>| v.ok_or_else(|| invalid(format!("{name} needs --{flag}")));
    let f = match name.as_str() {
        "onemax" => Benchmark::OneMax { n },
        "zeromax" => Benchmark::ZeroMax { n },
        "leadingones" => Benchmark::LeadingOnes { n },
        "jump" => Benchmark::Jump { n, k: need("k", args.k)? },
        "cliff" => Benchmark::Cliff { n, d: need("d", args.d)? },
        "simpletrap" => Benchmark::simple_trap_default(n),
        "hiddenpath" => Benchmark::HiddenPath {
            n,
            epsilon: args.epsilon.unwrap_or(DEFAULT_EPSILON),
        },
        "hypertrap" => Benchmark::HyperTrap {
            n,
            gamma: args.gamma.unwrap_or(DEFAULT_GAMMA),
        },
        other => {
            return Err(invalid(format!(
                "unknown function {other:?}, expected one of onemax, zeromax, leadingones, jump, cliff, simpletrap, hiddenpath, hypertrap"
            )))
        }
    };
    unused("k", args.k.is_some() && name != "jump", &name)?;
    unused("d", args.d.is_some() && name != "cliff", &name)?;
    unused("gamma", args.gamma.is_some() && name != "hypertrap", &name)?;
    unused("epsilon", args.epsilon.is_some() && name != "hiddenpath", &name)?;
    Ok(f)
}

pub fn algorithm(args: &ExperimentArgs) -> AlgorithmConfig {
    let mut cfg = AlgorithmConfig::new(args.algo);
    if let Some(v) = args.mu {
        cfg.mu = v;
    }
    if let Some(v) = args.dup {
        cfg.dup = v;
    }
    if let Some(v) = args.c {
        cfg.c = v;
    }
    if let Some(v) = args.tau {
        cfg.tau = v;
    }
    if let Some(v) = args.p {
        cfg.p = v;
    }
    if let Some(v) = args.div {
        cfg.div = v;
    }
    if let Some(v) = args.cm_mode {
        cfg.cm_mode = v;
    }
    if let Some(v) = args.variation {
        cfg.variation = v;
    }
    cfg
}

fn experiment_config(args: &ExperimentArgs, n: usize) -> Result<ExperimentConfig, CliError> {
    let cfg = ExperimentConfig::new(algorithm(args), benchmark(args, n)?, args.budget, args.runs, args.seed)
        .with_parallelism(args.parallelism);
    cfg.validate().map_err(invalid)?;
    Ok(cfg)
}

fn summary_line(label: &str, s: &SummaryStats) -> String {
    let ok = s.runs - s.censored_count;
    match &s.evals {
        Some(e) => format!(
            "{label}: {ok}/{} successes, mean {:.1} evaluations (95% CI {:.1} to {:.1}), median {:.1}, sd {:.1}",
            s.runs, e.mean, e.ci_low, e.ci_high, e.median, e.std
        ),
        None => format!("{label}: 0/{} successes", s.runs),
    }
}

fn describe(cfg: &ExperimentConfig) -> String {
    format!("{} on {}", cfg.algorithm.algorithm, cfg.benchmark)
}

fn summarise(records: &[RunRecord]) -> Result<SummaryStats, CliError> {
    summarize(records).map_err(invalid)
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let cfg = experiment_config(&args.experiment, args.n)?;
    let result = run_experiment(&cfg).map_err(invalid)?;
    if let Some(out) = &args.out {
        let ext = out.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("csv") => write_file(out, &records_to_csv(&result.records))?,
            Some("json") => write_file(out, &result_to_json(&result))?,
            _ => {
                write_file(&with_suffix(out, "csv"), &records_to_csv(&result.records))?;
                write_file(&with_suffix(out, "json"), &result_to_json(&result))?;
            }
        }
    }
    println!("{}", summary_line(&describe(&cfg), &summarise(&result.records)?));
    Ok(())
}

/// `prefix` with `.ext` appended, keeping any dots already in the name.
fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Everything a sweep produced, in `--n-list` order.
#[derive(Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub experiments: Vec<ExperimentResult>,
}

fn rows(experiments: &[ExperimentResult]) -> Result<Vec<SweepRow>, CliError> {
    experiments
        .iter()
        .map(|e| {
            Ok(SweepRow {
                n: e.config.benchmark.n(),
                summary: summarise(&e.records)?,
            })
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.n_list.len() < 3 {
        return Err(invalid(format!(
            "--n-list needs at least 3 sizes for a fit, got {}",
            args.n_list.len()
        )));
    }
    let mut seen = args.n_list.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != args.n_list.len() {
        return Err(invalid("--n-list repeats a size"));
    }
    // validate every size before running anything
    let configs = args
        .n_list
        .iter()
        .map(|&n| experiment_config(&args.experiment, n))
        .collect::<Result<Vec<_>, _>>()?;
    let experiments = configs
        .iter()
        .map(|c| run_experiment(c).map_err(invalid))
        .collect::<Result<Vec<_>, _>>()?;
    let (table, _) = sweep_table(&rows(&experiments)?);
    if let Some(out) = &args.out {
        write_file(&with_suffix(out, "tsv"), &table)?;
        let mut json = serde_json::to_string_pretty(&SweepResult { experiments }).expect("results serialise");
        json.push('\n');
        write_file(&with_suffix(out, "json"), &json)?;
    }
    print!("{table}");
    Ok(())
}

pub fn cmd_verify_op(args: &VerifyArgs) -> Result<(), CliError> {
    let mut rng = RngStream::new(args.seed);
    let (pass, line) = match args.which {
        Which::Hypermutation => {
            if args.n == 0 || args.k == 0 || args.k > args.n {
                return Err(invalid(format!("k out of range: need 1 <= k <= n = {}, got {}", args.n, args.k)));
            }
            if args.samples == 0 {
                return Err(invalid("samples out of range: need at least 1"));
            }
            let c = verify_hypermutation_distribution(args.n, args.k, args.samples, &mut rng);
            (
                c.pass,
                format!(
                    "hypermutation n={} k={}: {} hits in {} samples, empirical {:.6e}, exact {:.6e}, relative error {:.4}",
                    c.n, c.k, c.hits, c.samples, c.empirical, c.exact, c.relative_error
                ),
            )
        }
        Which::Ageing => {
            if args.mu == 0 || args.trials == 0 {
                return Err(invalid("mu and trials must be at least 1"));
            }
            let c = verify_ageing_survivors(args.mu, args.trials, &mut rng);
            (
                c.pass,
                format!(
                    "ageing mu={} trials={}: chi-square {:.3} on {} dof, p-value {:.4}, histogram {:?}",
                    c.mu, c.trials, c.statistic, c.dof, c.p_value, c.histogram
                ),
            )
        }
    };
    if pass {
        println!("PASS {line}");
        Ok(())
    } else {
        Err(CliError::Verification(format!("FAIL {line}")))
    }
}

/// First two numeric fields of every data line; headers and `#` lines skipped.
fn parse_points(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .filter_map(|l| {
            let mut it = l.split(|c: char| c == '\t' || c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
            let x = it.next()?.parse().ok()?;
            let y = it.next()?.parse().ok()?;
            Some((x, y))
        })
        .collect()
}

pub fn cmd_fit(args: &FitArgs) -> Result<(), CliError> {
    let text = read_file(&args.input)?;
    let fit = fit_loglog(&parse_points(&text)).map_err(invalid)?;
    println!(
        "slope={} intercept={} r_squared={} points={}",
        fit.slope,
        fit.intercept,
        fit.r_squared,
        fit.points.len()
    );
    Ok(())
}

fn load_any(path: &Path) -> Result<Vec<Loaded>, CliError> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let records = load_records_csv(path).map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(vec![Loaded::Records(records)]);
    }
    let text = read_file(path)?;
    if let Ok(sweep) = serde_json::from_str::<SweepResult>(&text) {
        return Ok(sweep.experiments.into_iter().map(Loaded::Experiment).collect());
    }
    let result = parse_results_json(&text, path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(vec![Loaded::Experiment(result)])
}

enum Loaded {
    Experiment(ExperimentResult),
    Records(Vec<RunRecord>),
}

/// What must agree between experiments that form one table: everything but n.
fn family(cfg: &ExperimentConfig) -> String {
    let mut b = serde_json::to_value(&cfg.benchmark).expect("benchmarks serialise");
    if let Some(obj) = b.as_object_mut() {
        obj.remove("n");
        // simpletrap's parameters are derived from n
        if cfg.benchmark.name() == "simpletrap" {
            obj.retain(|k, _| k == "function");
        }
    }
    let a = serde_json::to_value(&cfg.algorithm).expect("configs serialise");
    format!("{a}|{b}|{}|{}|{}", cfg.budget, cfg.runs, cfg.master_seed)
}

pub fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let mut loaded = Vec::new();
    for p in &args.inputs {
        loaded.extend(load_any(p)?);
    }
    let (experiments, bare): (Vec<_>, Vec<_>) = loaded.into_iter().partition(|l| matches!(l, Loaded::Experiment(_)));
    if !experiments.is_empty() && !bare.is_empty() {
        return Err(invalid("heterogeneous configs: CSV records cannot be combined with result files"));
    }
    let out = if let [Loaded::Records(records)] = bare.as_slice() {
        format!("{}\n", summary_line("records", &summarise(records)?))
    } else if !bare.is_empty() {
        return Err(invalid("heterogeneous configs: several CSV inputs carry no configuration to compare"));
    } else {
        let mut experiments: Vec<ExperimentResult> = experiments
            .into_iter()
            .map(|l| match l {
                Loaded::Experiment(e) => e,
                Loaded::Records(_) => unreachable!(),
            })
            .collect();
        let key = family(&experiments[0].config);
        if experiments.iter().any(|e| family(&e.config) != key) {
            return Err(invalid("heterogeneous configs: inputs differ in more than n"));
        }
        experiments.sort_by_key(|e| e.config.benchmark.n());
        if experiments.windows(2).any(|w| w[0].config.benchmark.n() == w[1].config.benchmark.n()) {
            return Err(invalid("heterogeneous configs: two inputs share the same n"));
        }
        if let [single] = experiments.as_slice() {
            format!("{}\n", summary_line(&describe(&single.config), &summarise(&single.records)?))
        } else {
            let mut text = format!("# {} on {}\n", experiments[0].config.algorithm.algorithm, experiments[0].config.benchmark.name());
            text.push_str(&sweep_table(&rows(&experiments)?).0);
            text
        }
    };
    if let Some(path) = &args.out {
        write_file(path, &out)?;
    }
    print!("{out}");
    Ok(())
}
