//! Statistics over experiment results and Monte Carlo checks of the operators.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::algorithms::RunRecord;
use crate::bitstring::BitString;
use crate::eval::{FitnessOracle, Stop};
use crate::operators::{hybrid_ageing, static_hypermutation, AgeLimit, CmMode, Individual, PositionSampler};
use crate::rng::RngStream;

pub const BOOTSTRAP_RESAMPLES: usize = 2000;
pub const BOOTSTRAP_SEED: u64 = 0x5EED_B007;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("log-log fit needs strictly positive coordinates, got ({0}, {1})")]
    NonPositive(f64, f64),
    #[error("all points share the same x coordinate")]
    Degenerate,
    #[error("no records to summarise")]
    Empty,
}

/// Evaluation statistics over the successful runs of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalStats {
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub runs: usize,
    pub success_rate: f64,
    pub censored_count: usize,
    /// Absent when no run succeeded.
    pub evals: Option<EvalStats>,
}

impl SummaryStats {
    pub fn mean_evals(&self) -> Option<f64> {
        self.evals.as_ref().map(|e| e.mean)
    }

    pub fn median_evals(&self) -> Option<f64> {
        self.evals.as_ref().map(|e| e.median)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(xs: &[f64], q: f64) -> f64 {
    let pos = q * (xs.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    xs[lo] + (xs[hi] - xs[lo]) * (pos - lo as f64)
}

/// [`summarize_with`] using [`BOOTSTRAP_RESAMPLES`] and [`BOOTSTRAP_SEED`].
pub fn summarize(records: &[RunRecord]) -> Result<SummaryStats, AnalysisError> {
    summarize_with(records, BOOTSTRAP_RESAMPLES, BOOTSTRAP_SEED)
}

/// Success rate plus mean, median, sample standard deviation and a
/// percentile-bootstrap 95% interval for the mean, all over successful runs.
/// Censored (failed) runs are only counted.
pub fn summarize_with(records: &[RunRecord], resamples: usize, seed: u64) -> Result<SummaryStats, AnalysisError> {
    if records.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let mut evals: Vec<f64> = records
        .iter()
        .filter(|r| r.success)
        .map(|r| r.evaluations_used as f64)
        .collect();
    let censored = records.len() - evals.len();
    let success_rate = evals.len() as f64 / records.len() as f64;
    if evals.is_empty() {
        return Ok(SummaryStats {
            runs: records.len(),
            success_rate,
            censored_count: censored,
            evals: None,
        });
    }
    // sorting makes the result independent of record order
    evals.sort_by(f64::total_cmp);
    let m = mean(&evals);
    let std = if evals.len() > 1 {
        (evals.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (evals.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let (ci_low, ci_high) = bootstrap_mean_ci(&evals, resamples, seed);
    Ok(SummaryStats {
        runs: records.len(),
        success_rate,
        censored_count: censored,
        evals: Some(EvalStats {
            mean: m,
            median: median_sorted(&evals),
            std,
            // the interval always covers the point estimate
            ci_low: ci_low.min(m),
            ci_high: ci_high.max(m),
        }),
    })
}

/// Percentile bootstrap 95% interval for the mean.
pub fn bootstrap_mean_ci(xs: &[f64], resamples: usize, seed: u64) -> (f64, f64) {
    let mut rng = RngStream::new(seed);
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples.max(1))
        .map(|_| (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    (quantile_sorted(&means, 0.025), quantile_sorted(&means, 0.975))
}

/// Least-squares line through `(ln n, ln y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    /// Natural-log intercept: `y ≈ exp(intercept) · n^slope`.
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn fit_loglog(points: &[(f64, f64)]) -> Result<ScalingFit, AnalysisError> {
    if points.len() < 3 {
        return Err(AnalysisError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(AnalysisError::NonPositive(x, y));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (mean(&lx), mean(&ly));
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::Degenerate);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}

/// Slope a pure power-law fit reports for the exact function `law` over `ns`.
/// Used to centre acceptance windows for laws with logarithmic factors.
pub fn reference_slope(ns: &[f64], law: impl Fn(f64) -> f64) -> Result<f64, AnalysisError> {
    let pts: Vec<(f64, f64)> = ns.iter().map(|&n| (n, law(n))).collect();
    fit_loglog(&pts).map(|f| f.slope)
}

/// One row of a sweep table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub summary: SummaryStats,
}

/// Tab-separated `(n, mean, ci_low, ci_high)` table followed by a fit line.
/// The fit is only attempted when every size succeeded in every run.
pub fn sweep_table(rows: &[SweepRow]) -> (String, Option<ScalingFit>) {
    let mut out = String::from("n\tmean\tci_low\tci_high\tsuccess_rate\n");
    for r in rows {
        match &r.summary.evals {
            Some(e) => writeln!(out, "{}\t{}\t{}\t{}\t{}", r.n, e.mean, e.ci_low, e.ci_high, r.summary.success_rate),
            None => writeln!(out, "{}\tNA\tNA\tNA\t{}", r.n, r.summary.success_rate),
        }
        .unwrap();
    }
    let complete = rows.iter().all(|r| r.summary.success_rate == 1.0);
    let fit = if complete {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.summary.mean_evals().map(|m| (r.n as f64, m)))
            .collect();
        fit_loglog(&pts).ok()
    } else {
        None
    };
    match &fit {
        Some(f) => writeln!(out, "# fit slope={} intercept={} r_squared={}", f.slope, f.intercept, f.r_squared),
        None if !complete => writeln!(out, "# fit skipped: success rate below 1 for some n"),
        None => writeln!(out, "# fit skipped: need at least 3 sizes"),
    }
    .unwrap();
    (out, fit)
}

/// Outcome of the hypermutation reachability check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCheck {
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub hits: u64,
    pub empirical: f64,
    pub exact: f64,
    pub relative_error: f64,
    pub pass: bool,
}

pub const DISTRIBUTION_TOLERANCE: f64 = 0.05;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Constant landscape that notes whether its `k`-th query was the target.
struct Probe {
    target: BitString,
    k: u64,
    calls: u64,
    hit: bool,
}

impl FitnessOracle for Probe {
    fn evaluate(&mut self, x: &BitString) -> Result<f64, Stop> {
        self.calls += 1;
        if self.calls == self.k && *x == self.target {
            self.hit = true;
        }
        Ok(0.0)
    }

    fn evaluations(&self) -> u64 {
        self.calls
    }
}

/// Runs full-potential strict hypermutation from `0^n` on a constant
/// landscape and measures how often the `k`-th evaluated point is the fixed
/// target `1^k 0^(n-k)`. The exact probability is `1 / C(n, k)`.
pub fn verify_hypermutation_distribution(n: usize, k: usize, samples: u64, rng: &mut RngStream) -> DistributionCheck {
    assert!(1 <= k && k <= n, "need 1 <= k <= n");
    let parent = Individual::new(BitString::zeros(n), 0.0);
    let target = BitString::prefix_ones(n, k);
    let mut sampler = PositionSampler::new(n);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut probe = Probe {
            target: target.clone(),
            k: k as u64,
            calls: 0,
            hit: false,
        };
        static_hypermutation(&parent, n, CmMode::Strict, &mut probe, rng, &mut sampler)
            .expect("the probe never stops a walk");
        debug_assert_eq!(probe.calls, n as u64);
        hits += probe.hit as u64;
    }
    let empirical = hits as f64 / samples as f64;
    let exact = 1.0 / binomial(n, k);
    let relative_error = (empirical - exact).abs() / exact;
    DistributionCheck {
        n,
        k,
        samples,
        hits,
        empirical,
        exact,
        relative_error,
        pass: relative_error <= DISTRIBUTION_TOLERANCE,
    }
}

/// Outcome of the ageing survivor check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgeingCheck {
    pub mu: usize,
    pub trials: u64,
    /// `histogram[s]` = trials with exactly `s` survivors.
    pub histogram: Vec<u64>,
    /// Binomial(mu, 1/mu) probabilities.
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub pass: bool,
}

pub const AGEING_SIGNIFICANCE: f64 = 0.01;

/// Binomial probability mass function.
pub fn binomial_pmf(n: usize, p: f64, k: usize) -> f64 {
    binomial(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Pearson chi-square of `observed` counts against `probs`, pooling adjacent
/// cells from the tails until every expected count is at least 5. Returns
/// `(statistic, dof, p_value)`.
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> (f64, usize, f64) {
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| (o as f64, p * total as f64))
        .collect();
    // merge the smallest-expectation end cell into its neighbour
    while cells.len() > 1 {
        let (first, last) = (cells[0].1, cells[cells.len() - 1].1);
        if first >= 5.0 && last >= 5.0 {
            break;
        }
        if last <= first {
            let (o, e) = cells.pop().unwrap();
            let tail = cells.last_mut().unwrap();
            tail.0 += o;
            tail.1 += e;
        } else {
            let (o, e) = cells.remove(0);
            cells[0].0 += o;
            cells[0].1 += e;
        }
    }
    if cells.len() < 2 {
        return (0.0, 0, 1.0);
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len() - 1;
    let p_value = ChiSquared::new(dof as f64).expect("dof is positive").sf(statistic);
    (statistic, dof, p_value)
}

/// Ages a population of `mu` individuals that are all past the threshold,
/// once per trial, and tests the survivor counts against Binomial(mu, 1/mu).
pub fn verify_ageing_survivors(mu: usize, trials: u64, rng: &mut RngStream) -> AgeingCheck {
    assert!(mu >= 1);
    let tau = AgeLimit::Bounded(0);
    let template = vec![Individual::new(BitString::zeros(1), 0.0); mu];
    let mut histogram = vec![0u64; mu + 1];
    let mut pop = Vec::with_capacity(mu);
    for _ in 0..trials {
        pop.clear();
        pop.extend(template.iter().cloned());
        hybrid_ageing(&mut pop, tau, mu, rng);
        histogram[pop.len()] += 1;
    }
    let p = 1.0 / mu as f64;
    let expected: Vec<f64> = (0..=mu).map(|s| binomial_pmf(mu, p, s)).collect();
    let (statistic, dof, p_value) = chi_square_test(&histogram, &expected);
    let pass = if dof == 0 {
        // a single pooled cell: every trial must fall where the mass is
        histogram
            .iter()
            .zip(&expected)
            .all(|(&o, &e)| e > 0.0 || o == 0)
    } else {
        p_value >= AGEING_SIGNIFICANCE
    };
    AgeingCheck {
        mu,
        trials,
        histogram,
        expected,
        statistic,
        dof,
        p_value,
        pass,
    }
}
