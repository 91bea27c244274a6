//! Evaluation accounting.
//!
//! Runtime is measured in fitness evaluations, so every evaluation goes through
//! a [`FitnessOracle`]. [`Evaluator`] is the production oracle: it charges the
//! [`EvaluationCounter`], refuses to evaluate once the budget is spent, and
//! reports an evaluated optimum by short-circuiting with [`Stop::OptimumFound`].

use crate::benchmarks::Benchmark;
use crate::bitstring::BitString;

/// Why a run stopped. Operators propagate it with `?`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    OptimumFound,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvaluationCounter {
    used: u64,
    budget: Option<u64>,
}

impl EvaluationCounter {
    pub fn new(budget: u64) -> Self {
        Self {
            used: 0,
            budget: Some(budget),
        }
    }

    pub fn unbounded() -> Self {
        Self {
            used: 0,
            budget: None,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.budget, Some(b) if self.used >= b)
    }

    /// Charges one evaluation, or fails without charging when the budget is
    /// already spent.
    #[inline]
    pub fn charge(&mut self) -> Result<(), Stop> {
        if self.exhausted() {
            return Err(Stop::BudgetExhausted);
        }
        self.used += 1;
        Ok(())
    }
}

/// Anything that can score points for the operators.
pub trait FitnessOracle {
    fn evaluate(&mut self, x: &BitString) -> Result<f64, Stop>;

    /// Evaluations charged so far.
    fn evaluations(&self) -> u64;
}

pub struct Evaluator<'a> {
    benchmark: &'a Benchmark,
    counter: EvaluationCounter,
}

impl<'a> Evaluator<'a> {
    pub fn new(benchmark: &'a Benchmark, counter: EvaluationCounter) -> Self {
        Self { benchmark, counter }
    }

    pub fn with_budget(benchmark: &'a Benchmark, budget: u64) -> Self {
        Self::new(benchmark, EvaluationCounter::new(budget))
    }

    pub fn benchmark(&self) -> &Benchmark {
        self.benchmark
    }

    pub fn counter(&self) -> EvaluationCounter {
        self.counter
    }
}

impl FitnessOracle for Evaluator<'_> {
    #[inline]
    fn evaluate(&mut self, x: &BitString) -> Result<f64, Stop> {
        self.counter.charge()?;
        if self.benchmark.is_optimum(x) {
            return Err(Stop::OptimumFound);
        }
        Ok(self.benchmark.evaluate(x))
    }

    fn evaluations(&self) -> u64 {
        self.counter.used()
    }
}

/// Evaluates `x` under `benchmark`, charging `counter`.
///
/// Returns `Ok(fitness)` for ordinary points, `Err(Stop::OptimumFound)` after
/// charging for an optimal point, and `Err(Stop::BudgetExhausted)` without
/// charging once `counter` is spent.
pub fn evaluate(
    benchmark: &Benchmark,
    x: &BitString,
    counter: &mut EvaluationCounter,
) -> Result<f64, Stop> {
    let mut ev = Evaluator::new(benchmark, *counter);
    let out = ev.evaluate(x);
    *counter = ev.counter;
    out
}
