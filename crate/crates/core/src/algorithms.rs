//! Complete search heuristics built from the operators.
//!
//! Every algorithm runs through [`run`]: the configuration is validated
//! against the benchmark before the first evaluation, then the algorithm loops
//! until an optimum is evaluated or the budget is spent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::benchmarks::Benchmark;
use crate::error::{ConfigError, ParseError};
use crate::eval::{Evaluator, FitnessOracle, Stop};
use crate::operators::{
    clone_population, fill_population, hybrid_ageing, hypermacromutation, mutation_potential,
    rls_one, rls_p, select_survivors, static_hypermutation, AgeLimit, CmMode, Individual,
    PositionSampler, Sbm,
};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmId {
    /// Cloning, static hypermutation, hybrid ageing, selection.
    #[serde(rename = "optia")]
    OptIa,
    /// Opt-IA with hypermacromutation alongside hypermutation and genotype
    /// diversity in selection.
    #[serde(rename = "optia-star")]
    OptIaStar,
    /// (1+1) IA^hyp.
    #[serde(rename = "ia-hyp")]
    IaHyp,
    /// (1+1) EA with standard bit mutation.
    Ea,
    /// (1+1) RLS flipping one bit.
    Rls,
    /// (mu+1) RLS_p with hybrid ageing.
    #[serde(rename = "rls-p-ageing")]
    RlsPAgeing,
    /// (mu+1) RLS with hybrid ageing and genotype diversity.
    #[serde(rename = "rls-ageing-div")]
    RlsAgeingDiv,
    /// (mu+1) EA with hybrid ageing.
    #[serde(rename = "ea-ageing")]
    EaAgeing,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 8] = [
        AlgorithmId::OptIa,
        AlgorithmId::OptIaStar,
        AlgorithmId::IaHyp,
        AlgorithmId::Ea,
        AlgorithmId::Rls,
        AlgorithmId::RlsPAgeing,
        AlgorithmId::RlsAgeingDiv,
        AlgorithmId::EaAgeing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::OptIa => "optia",
            AlgorithmId::OptIaStar => "optia-star",
            AlgorithmId::IaHyp => "ia-hyp",
            AlgorithmId::Ea => "ea",
            AlgorithmId::Rls => "rls",
            AlgorithmId::RlsPAgeing => "rls-p-ageing",
            AlgorithmId::RlsAgeingDiv => "rls-ageing-div",
            AlgorithmId::EaAgeing => "ea-ageing",
        }
    }

    /// The diversity flag an algorithm always uses, if it fixes one.
    pub fn forced_div(self) -> Option<bool> {
        match self {
            AlgorithmId::OptIa => None,
            AlgorithmId::OptIaStar | AlgorithmId::RlsAgeingDiv => Some(true),
            _ => Some(false),
        }
    }

    fn single_individual(self) -> bool {
        matches!(self, AlgorithmId::IaHyp | AlgorithmId::Ea | AlgorithmId::Rls)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = AlgorithmId::ALL.iter().map(|a| a.name()).collect();
                ParseError::new(format!("unknown algorithm {s:?}, expected one of {}", names.join(", ")))
            })
    }
}

/// Variation operator of Opt-IA. `Sbm` swaps hypermutation for standard bit
/// mutation while keeping ageing and selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variation {
    #[default]
    Hypermutation,
    Sbm,
}

impl FromStr for Variation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hypermutation" | "hyp" => Ok(Variation::Hypermutation),
            "sbm" => Ok(Variation::Sbm),
            other => Err(ParseError::new(format!("unknown variation {other:?}"))),
        }
    }
}

impl fmt::Display for Variation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variation::Hypermutation => "hypermutation",
            Variation::Sbm => "sbm",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub algorithm: AlgorithmId,
    pub mu: usize,
    pub dup: usize,
    /// Mutation potential factor, `M = ceil(c n)`.
    pub c: f64,
    pub tau: AgeLimit,
    /// Copy probability of RLS_p.
    pub p: f64,
    pub div: bool,
    pub cm_mode: CmMode,
    pub variation: Variation,
}

impl AlgorithmConfig {
    /// Defaults: `mu = dup = 1`, `c = 1`, `tau = inf`, `p = 0`, nonstrict FCM,
    /// hypermutation, and the algorithm's own diversity flag.
    pub fn new(algorithm: AlgorithmId) -> Self {
        Self {
            algorithm,
            mu: 1,
            dup: 1,
            c: 1.0,
            tau: AgeLimit::Unbounded,
            p: 0.0,
            div: algorithm.forced_div().unwrap_or(false),
            cm_mode: CmMode::NonStrict,
            variation: Variation::Hypermutation,
        }
    }

    pub fn opt_ia(mu: usize, dup: usize, c: f64, tau: AgeLimit) -> Self {
        Self {
            mu,
            dup,
            c,
            tau,
            ..Self::new(AlgorithmId::OptIa)
        }
    }

    pub fn opt_ia_star(mu: usize, dup: usize, c: f64, tau: AgeLimit) -> Self {
        Self {
            mu,
            dup,
            c,
            tau,
            ..Self::new(AlgorithmId::OptIaStar)
        }
    }

    pub fn ia_hyp(c: f64, cm_mode: CmMode) -> Self {
        Self {
            c,
            cm_mode,
            ..Self::new(AlgorithmId::IaHyp)
        }
    }

    pub fn ea() -> Self {
        Self::new(AlgorithmId::Ea)
    }

    pub fn rls() -> Self {
        Self::new(AlgorithmId::Rls)
    }

    pub fn rls_p_ageing(mu: usize, p: f64, tau: AgeLimit) -> Self {
        Self {
            mu,
            p,
            tau,
            ..Self::new(AlgorithmId::RlsPAgeing)
        }
    }

    pub fn rls_ageing_div(mu: usize, tau: AgeLimit) -> Self {
        Self {
            mu,
            tau,
            ..Self::new(AlgorithmId::RlsAgeingDiv)
        }
    }

    pub fn ea_ageing(mu: usize, tau: AgeLimit) -> Self {
        Self {
            mu,
            tau,
            ..Self::new(AlgorithmId::EaAgeing)
        }
    }

    pub fn with_div(mut self, div: bool) -> Self {
        self.div = div;
        self
    }

    pub fn with_cm_mode(mut self, cm_mode: CmMode) -> Self {
        self.cm_mode = cm_mode;
        self
    }

    pub fn with_variation(mut self, variation: Variation) -> Self {
        self.variation = variation;
        self
    }

    /// Checks the parameter invariants against `benchmark`.
    pub fn validate(&self, benchmark: &Benchmark) -> Result<(), ConfigError> {
        benchmark.validate()?;
        let algo = self.algorithm;
        if self.mu == 0 {
            return Err(ConfigError::range("mu", "mu must be at least 1"));
        }
        if self.dup == 0 {
            return Err(ConfigError::range("dup", "dup must be at least 1"));
        }
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(ConfigError::range("c", format!("need 0 < c <= 1, got {}", self.c)));
        }
        if !(0.0..0.5).contains(&self.p) {
            return Err(ConfigError::range("p", format!("need 0 <= p < 1/2, got {}", self.p)));
        }
        if algo.single_individual() && self.mu != 1 {
            return Err(ConfigError::Inconsistent(format!("{algo} requires mu = 1, got {}", self.mu)));
        }
        if algo == AlgorithmId::IaHyp && self.dup != 1 {
            return Err(ConfigError::Inconsistent(format!("{algo} requires dup = 1, got {}", self.dup)));
        }
        if let Some(div) = algo.forced_div() {
            if div != self.div {
                return Err(ConfigError::Inconsistent(format!(
                    "{algo} always runs with div = {}",
                    u8::from(div)
                )));
            }
        }
        if self.p != 0.0 && algo != AlgorithmId::RlsPAgeing {
            return Err(ConfigError::Inconsistent(format!("p only applies to rls-p-ageing, not {algo}")));
        }
        if self.variation == Variation::Sbm && algo != AlgorithmId::OptIa {
            return Err(ConfigError::Inconsistent(format!(
                "the sbm variation only applies to optia, not {algo}"
            )));
        }
        Ok(())
    }
}

/// Outcome of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub success: bool,
    /// Evaluations charged; equals the budget for failed runs.
    pub evaluations_used: u64,
    pub generations: u64,
    /// Optimal value on success, otherwise the best fitness held by the
    /// population when the budget ran out.
    pub best_fitness: f64,
}

/// Runs `config` on `benchmark` with `budget` evaluations.
pub fn run(
    config: &AlgorithmConfig,
    benchmark: &Benchmark,
    budget: u64,
    seed: u64,
) -> Result<RunRecord, ConfigError> {
    run_with_population(config, benchmark, budget, seed).map(|(record, _)| record)
}

/// [`run`], also returning the population held when the run stopped.
pub fn run_with_population(
    config: &AlgorithmConfig,
    benchmark: &Benchmark,
    budget: u64,
    seed: u64,
) -> Result<(RunRecord, Vec<Individual>), ConfigError> {
    if budget == 0 {
        return Err(ConfigError::range("budget", "budget must be positive"));
    }
    config.validate(benchmark)?;
    let mut oracle = Evaluator::with_budget(benchmark, budget);
    let out = drive(config, benchmark.n(), &mut oracle, RngStream::new(seed));
    let record = RunRecord {
        seed,
        success: out.success,
        evaluations_used: oracle.evaluations(),
        generations: out.generations,
        best_fitness: if out.success {
            benchmark.optimum_value()
        } else {
            out.best_fitness
        },
    };
    Ok((record, out.population))
}

fn run_checked(
    expected: &[AlgorithmId],
    config: &AlgorithmConfig,
    benchmark: &Benchmark,
    budget: u64,
    seed: u64,
) -> Result<RunRecord, ConfigError> {
    if !expected.contains(&config.algorithm) {
        return Err(ConfigError::Inconsistent(format!(
            "expected a {} configuration, got {}",
            expected[0], config.algorithm
        )));
    }
    run(config, benchmark, budget, seed)
}

pub fn run_opt_ia(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::OptIa], config, benchmark, budget, seed)
}

pub fn run_opt_ia_star(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::OptIaStar], config, benchmark, budget, seed)
}

pub fn run_one_plus_one_ia_hyp(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::IaHyp], config, benchmark, budget, seed)
}

pub fn run_one_plus_one_ea(benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run(&AlgorithmConfig::ea(), benchmark, budget, seed)
}

pub fn run_mu_rls_p_ageing(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::RlsPAgeing], config, benchmark, budget, seed)
}

pub fn run_mu_rls_ageing_div(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::RlsAgeingDiv], config, benchmark, budget, seed)
}

pub fn run_mu_ea_ageing(config: &AlgorithmConfig, benchmark: &Benchmark, budget: u64, seed: u64) -> Result<RunRecord, ConfigError> {
    run_checked(&[AlgorithmId::EaAgeing], config, benchmark, budget, seed)
}

pub(crate) struct DriveOutcome {
    pub success: bool,
    pub generations: u64,
    pub best_fitness: f64,
    pub population: Vec<Individual>,
}

/// Runs an already validated configuration against any oracle.
pub(crate) fn drive<O: FitnessOracle>(
    config: &AlgorithmConfig,
    n: usize,
    oracle: &mut O,
    rng: RngStream,
) -> DriveOutcome {
    let mut state = Search::new(config, n, rng);
    let stop = state.run(oracle);
    DriveOutcome {
        success: stop == Stop::OptimumFound,
        generations: state.generations,
        best_fitness: state.best_fitness(),
        population: state.population,
    }
}

/// Mutable state of one run. The population is kept here so that it is still
/// inspectable after a `Stop` interrupts a generation.
pub(crate) struct Search<'a> {
    config: &'a AlgorithmConfig,
    n: usize,
    potential: usize,
    rng: RngStream,
    sampler: PositionSampler,
    sbm: Option<Sbm>,
    pub population: Vec<Individual>,
    pub generations: u64,
}

impl<'a> Search<'a> {
    pub fn new(config: &'a AlgorithmConfig, n: usize, rng: RngStream) -> Self {
        let uses_sbm = matches!(config.algorithm, AlgorithmId::Ea | AlgorithmId::EaAgeing)
            || (config.algorithm == AlgorithmId::OptIa && config.variation == Variation::Sbm);
        Self {
            config,
            n,
            potential: mutation_potential(config.c, n),
            rng,
            sampler: PositionSampler::new(n),
            sbm: uses_sbm.then(|| Sbm::new(n)),
            population: Vec::with_capacity(config.mu * (2 * config.dup + 1)),
            generations: 0,
        }
    }

    pub fn best_fitness(&self) -> f64 {
        self.population
            .iter()
            .map(|x| x.fitness)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn run<O: FitnessOracle>(&mut self, oracle: &mut O) -> Stop {
        match self.initialise(oracle) {
            Err(stop) => stop,
            Ok(()) => loop {
                if let Err(stop) = self.generation(oracle) {
                    break stop;
                }
            },
        }
    }

    pub fn initialise<O: FitnessOracle>(&mut self, oracle: &mut O) -> Result<(), Stop> {
        fill_population(&mut self.population, self.config.mu, self.n, oracle, &mut self.rng)
    }

    pub fn generation<O: FitnessOracle>(&mut self, oracle: &mut O) -> Result<(), Stop> {
        self.generations += 1;
        match self.config.algorithm {
            AlgorithmId::OptIa => self.opt_ia_generation(oracle, false),
            AlgorithmId::OptIaStar => self.opt_ia_generation(oracle, true),
            AlgorithmId::IaHyp | AlgorithmId::Ea | AlgorithmId::Rls => self.one_plus_one_generation(oracle),
            AlgorithmId::RlsPAgeing | AlgorithmId::RlsAgeingDiv | AlgorithmId::EaAgeing => {
                self.mu_plus_one_generation(oracle)
            }
        }
    }

    fn hypermutate<O: FitnessOracle>(&mut self, parent: &Individual, oracle: &mut O) -> Result<Individual, Stop> {
        static_hypermutation(
            parent,
            self.potential,
            self.config.cm_mode,
            oracle,
            &mut self.rng,
            &mut self.sampler,
        )
        .map(|r| r.offspring)
    }

    fn standard_bit_mutation<O: FitnessOracle>(&mut self, parent: &Individual, oracle: &mut O) -> Result<Individual, Stop> {
        let sbm = self.sbm.as_mut().expect("sbm workspace is set up for sbm algorithms");
        let y = sbm.apply(&parent.genotype, &mut self.rng);
        let f = oracle.evaluate(&y)?;
        Ok(parent.child(y, f))
    }

    fn opt_ia_generation<O: FitnessOracle>(&mut self, oracle: &mut O, star: bool) -> Result<(), Stop> {
        let clones = clone_population(&self.population, self.config.dup);
        let mut offspring = Vec::with_capacity(clones.len() * if star { 2 } else { 1 });
        for clone in &clones {
            let y = match self.config.variation {
                Variation::Hypermutation => self.hypermutate(clone, oracle)?,
                Variation::Sbm => self.standard_bit_mutation(clone, oracle)?,
            };
            offspring.push(y);
        }
        if star {
            for clone in &clones {
                let r = hypermacromutation(clone, self.config.cm_mode, oracle, &mut self.rng)?;
                offspring.push(r.offspring);
            }
        }
        self.age_and_select(offspring, oracle)
    }

    fn one_plus_one_generation<O: FitnessOracle>(&mut self, oracle: &mut O) -> Result<(), Stop> {
        let parent = self.population[0].clone();
        let y = match self.config.algorithm {
            AlgorithmId::IaHyp => self.hypermutate(&parent, oracle)?,
            AlgorithmId::Ea => self.standard_bit_mutation(&parent, oracle)?,
            _ => {
                let g = rls_one(&parent.genotype, &mut self.rng);
                let f = oracle.evaluate(&g)?;
                parent.child(g, f)
            }
        };
        if y.fitness >= parent.fitness {
            self.population[0] = y;
        }
        Ok(())
    }

    fn mu_plus_one_generation<O: FitnessOracle>(&mut self, oracle: &mut O) -> Result<(), Stop> {
        let parent = self.population[self.rng.index(self.population.len())].clone();
        let y = match self.config.algorithm {
            AlgorithmId::EaAgeing => self.standard_bit_mutation(&parent, oracle)?,
            AlgorithmId::RlsPAgeing => {
                let g = rls_p(&parent.genotype, self.config.p, &mut self.rng);
                let f = oracle.evaluate(&g)?;
                parent.child(g, f)
            }
            _ => {
                let g = rls_one(&parent.genotype, &mut self.rng);
                let f = oracle.evaluate(&g)?;
                parent.child(g, f)
            }
        };
        self.age_and_select(vec![y], oracle)
    }

    /// Hybrid ageing over parents then offspring, selection over the
    /// survivors, then refill.
    fn age_and_select<O: FitnessOracle>(&mut self, mut offspring: Vec<Individual>, oracle: &mut O) -> Result<(), Stop> {
        let cfg = self.config;
        let mut parents = std::mem::take(&mut self.population);
        hybrid_ageing(&mut parents, cfg.tau, cfg.mu, &mut self.rng);
        hybrid_ageing(&mut offspring, cfg.tau, cfg.mu, &mut self.rng);
        self.population = select_survivors(parents, offspring, cfg.mu, cfg.div, &mut self.rng);
        fill_population(&mut self.population, cfg.mu, self.n, oracle, &mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::BitString;
    use crate::eval::EvaluationCounter;

    /// Wraps an evaluator and counts calls on its own.
    struct Tally<'a> {
        inner: Evaluator<'a>,
        calls: u64,
    }

    impl FitnessOracle for Tally<'_> {
        fn evaluate(&mut self, x: &BitString) -> Result<f64, Stop> {
            let r = self.inner.evaluate(x);
            if r != Err(Stop::BudgetExhausted) {
                self.calls += 1;
            }
            r
        }
        fn evaluations(&self) -> u64 {
            self.inner.evaluations()
        }
    }

    #[test]
    fn tiny_onemax_is_solved_at_once() {
        let f = Benchmark::OneMax { n: 1 };
        for seed in 0..20 {
            let r = run(&AlgorithmConfig::opt_ia(1, 1, 1.0, AgeLimit::Unbounded), &f, 1000, seed).unwrap();
            assert!(r.success);
            assert!(r.evaluations_used <= 2);
            let r = run(&AlgorithmConfig::opt_ia_star(1, 1, 1.0, AgeLimit::Unbounded), &f, 1000, seed).unwrap();
            assert!(r.success);
            assert!(r.evaluations_used <= 3);
        }
    }

    #[test]
    fn degenerate_configs_do_not_crash() {
        let f = Benchmark::OneMax { n: 1 };
        for algo in AlgorithmId::ALL {
            let r = run(&AlgorithmConfig::new(algo), &f, 1, 3).unwrap();
            assert!(r.evaluations_used <= 1);
        }
        let g = Benchmark::LeadingOnes { n: 30 };
        for algo in AlgorithmId::ALL {
            let r = run(&AlgorithmConfig::new(algo), &g, 1, 3).unwrap();
            assert_eq!(r.evaluations_used, 1);
            assert!(!r.success);
        }
    }

    #[test]
    fn validation_happens_before_evaluation() {
        let bad = Benchmark::Jump { n: 10, k: 11 };
        for algo in AlgorithmId::ALL {
            let err = run(&AlgorithmConfig::new(algo), &bad, 100, 0).unwrap_err();
            assert!(err.to_string().starts_with("k out of range"));
        }
        let f = Benchmark::OneMax { n: 10 };
        let mut c = AlgorithmConfig::ia_hyp(1.0, CmMode::Strict);
        c.mu = 2;
        assert!(run(&c, &f, 100, 0).is_err());
        assert!(run(&AlgorithmConfig::rls_ageing_div(3, AgeLimit::Bounded(3)).with_div(false), &f, 100, 0).is_err());
        assert!(run(&AlgorithmConfig::ea().with_variation(Variation::Sbm), &f, 100, 0).is_err());
        let mut c = AlgorithmConfig::opt_ia(1, 1, 1.5, AgeLimit::Unbounded);
        assert!(run(&c, &f, 100, 0).is_err());
        c.c = 0.5;
        assert!(run(&c, &f, 0, 0).is_err());
        assert!(run_opt_ia(&AlgorithmConfig::ea(), &f, 100, 0).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let f = Benchmark::Cliff { n: 30, d: 5 };
        for algo in AlgorithmId::ALL {
            let mut c = AlgorithmConfig::new(algo);
            if !algo.single_individual() {
                c.mu = 3;
                c.tau = AgeLimit::Bounded(50);
            }
            let a = run(&c, &f, 20_000, 99).unwrap();
            let b = run(&c, &f, 20_000, 99).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn failed_runs_use_the_whole_budget() {
        let f = Benchmark::Jump { n: 40, k: 8 };
        let r = run(&AlgorithmConfig::ea(), &f, 5_000, 1).unwrap();
        assert!(!r.success);
        assert_eq!(r.evaluations_used, 5_000);
        assert!(r.best_fitness <= 48.0);
    }

    #[test]
    fn every_evaluation_is_accounted_for() {
        let benches = [
            Benchmark::OneMax { n: 40 },
            Benchmark::Cliff { n: 40, d: 8 },
            Benchmark::simple_trap_default(24),
        ];
        for f in &benches {
            for algo in AlgorithmId::ALL {
                let mut c = AlgorithmConfig::new(algo);
                if !algo.single_individual() {
                    c.mu = 4;
                    c.dup = if algo == AlgorithmId::OptIa { 2 } else { 1 };
                    c.tau = AgeLimit::Bounded(30);
                }
                let mut tally = Tally {
                    inner: Evaluator::new(f, EvaluationCounter::new(30_000)),
                    calls: 0,
                };
                let out = drive(&c, f.n(), &mut tally, RngStream::new(5));
                assert_eq!(tally.calls, tally.inner.evaluations(), "{algo} on {f}");
                if !out.success {
                    assert_eq!(tally.calls, 30_000);
                }
            }
        }
    }

    #[test]
    fn opt_ia_generation_cost_bounds() {
        let f = Benchmark::OneMax { n: 50 };
        let c = AlgorithmConfig::opt_ia(3, 2, 0.4, AgeLimit::Unbounded);
        let m = mutation_potential(0.4, 50) as u64;
        let mut ev = Evaluator::with_budget(&f, 10_000_000);
        let mut s = Search::new(&c, 50, RngStream::new(17));
        s.initialise(&mut ev).unwrap();
        assert_eq!(ev.evaluations(), 3);
        for _ in 0..200 {
            let before = ev.evaluations();
            if s.generation(&mut ev).is_err() {
                break;
            }
            let spent = ev.evaluations() - before;
            assert!((6..=6 * m).contains(&spent), "{spent}");
            assert_eq!(s.population.len(), 3);
        }
    }

    #[test]
    fn opt_ia_star_makes_two_mutants_per_clone() {
        struct Flat(u64);
        impl FitnessOracle for Flat {
            fn evaluate(&mut self, _: &BitString) -> Result<f64, Stop> {
                self.0 += 1;
                Ok(1.0)
            }
            fn evaluations(&self) -> u64 {
                self.0
            }
        }
        // nonstrict FCM on a flat landscape stops after one flip, so every
        // mutant costs exactly one evaluation
        let c = AlgorithmConfig::opt_ia_star(3, 2, 1.0, AgeLimit::Unbounded);
        let mut flat = Flat(0);
        let mut s = Search::new(&c, 20, RngStream::new(1));
        s.initialise(&mut flat).unwrap();
        s.generation(&mut flat).unwrap();
        assert_eq!(flat.0, 3 + 2 * 3 * 2);
    }

    #[test]
    fn best_fitness_never_drops_without_ageing() {
        let f = Benchmark::Cliff { n: 40, d: 6 };
        for algo in [AlgorithmId::OptIa, AlgorithmId::RlsPAgeing, AlgorithmId::EaAgeing, AlgorithmId::IaHyp, AlgorithmId::Ea] {
            let mut c = AlgorithmConfig::new(algo);
            if !algo.single_individual() {
                c.mu = 4;
            }
            if algo == AlgorithmId::RlsPAgeing {
                c.p = 0.25;
            }
            let mut ev = Evaluator::with_budget(&f, 200_000);
            let mut s = Search::new(&c, 40, RngStream::new(23));
            s.initialise(&mut ev).unwrap();
            let mut best = s.best_fitness();
            while s.generation(&mut ev).is_ok() {
                let now = s.best_fitness();
                assert!(now >= best, "{algo}: {now} < {best}");
                best = now;
            }
        }
    }

    #[test]
    fn single_ageing_individual_restarts_like_rls() {
        let f = Benchmark::OneMax { n: 30 };
        let r = run(&AlgorithmConfig::rls_ageing_div(1, AgeLimit::Bounded(90)), &f, 1_000_000, 4).unwrap();
        assert!(r.success);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.name().parse::<AlgorithmId>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.name()));
        }
        assert!("sswm".parse::<AlgorithmId>().is_err());
    }
}
