//! Variation, cloning, ageing and selection operators.
//!
//! Operators that evaluate points take a [`FitnessOracle`] and propagate
//! [`Stop`] with `?`, so a run ends the moment an optimum is evaluated or the
//! budget runs out, even in the middle of a hypermutation walk.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitstring::BitString;
use crate::error::ParseError;
use crate::eval::{FitnessOracle, Stop};
use crate::rng::RngStream;

/// A b-cell: genotype, age and cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: BitString,
    pub age: u64,
    pub fitness: f64,
}

impl Individual {
    pub fn new(genotype: BitString, fitness: f64) -> Self {
        Self {
            genotype,
            age: 0,
            fitness,
        }
    }

    /// Uniformly random, evaluated, age 0.
    pub fn random<O: FitnessOracle>(
        n: usize,
        oracle: &mut O,
        rng: &mut RngStream,
    ) -> Result<Self, Stop> {
        let genotype = BitString::random(n, rng);
        let fitness = oracle.evaluate(&genotype)?;
        Ok(Self::new(genotype, fitness))
    }

    /// Offspring of `self` with the given genotype and fitness. The age resets
    /// only on strict improvement over the parent.
    pub fn child(&self, genotype: BitString, fitness: f64) -> Self {
        let age = if fitness > self.fitness { 0 } else { self.age };
        Self {
            genotype,
            age,
            fitness,
        }
    }
}

/// Stop-at-first-constructive-mutation policy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmMode {
    /// Flip all `M` bits, evaluate only the end point.
    None,
    /// Stop at the first point strictly better than the parent.
    Strict,
    /// Stop at the first point at least as good as the parent.
    #[default]
    NonStrict,
}

impl CmMode {
    #[inline]
    pub fn is_constructive(self, candidate: f64, parent: f64) -> bool {
        match self {
            CmMode::None => false,
            CmMode::Strict => candidate > parent,
            CmMode::NonStrict => candidate >= parent,
        }
    }
}

impl fmt::Display for CmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmMode::None => "none",
            CmMode::Strict => "strict",
            CmMode::NonStrict => "nonstrict",
        })
    }
}

impl FromStr for CmMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "off" => Ok(CmMode::None),
            "strict" | ">" => Ok(CmMode::Strict),
            "nonstrict" | "non-strict" | ">=" => Ok(CmMode::NonStrict),
            other => Err(ParseError::new(format!("unknown cm mode {other:?}"))),
        }
    }
}

/// Ageing threshold τ. `Unbounded` disables ageing deaths; it is written
/// `inf` in text and JSON.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AgeLimit {
    Bounded(u64),
    #[default]
    Unbounded,
}

impl AgeLimit {
    #[inline]
    pub fn exceeded_by(self, age: u64) -> bool {
        match self {
            AgeLimit::Bounded(tau) => age > tau,
            AgeLimit::Unbounded => false,
        }
    }
}

impl fmt::Display for AgeLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgeLimit::Bounded(t) => write!(f, "{t}"),
            AgeLimit::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for AgeLimit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(AgeLimit::Unbounded);
        }
        s.parse::<u64>()
            .map(AgeLimit::Bounded)
            .map_err(|_| ParseError::new(format!("tau must be a non-negative integer or inf, got {s:?}")))
    }
}

impl Serialize for AgeLimit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AgeLimit::Bounded(t) => serializer.serialize_u64(*t),
            AgeLimit::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for AgeLimit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(t) => Ok(AgeLimit::Bounded(t)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Mutation potential `M = ceil(c * n)`, clamped to `[1, n]`.
pub fn mutation_potential(c: f64, n: usize) -> usize {
    let m = (c * n as f64 - 1e-9).ceil();
    (m.max(1.0) as usize).min(n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationResult {
    pub offspring: Individual,
    pub evals_used: u64,
    /// The walk stopped because the active cm mode fired.
    pub constructive: bool,
}

/// Lazily draws distinct positions uniformly at random, one after another.
///
/// This is a partial Fisher-Yates shuffle over a permutation buffer that is
/// reused between calls; whatever order the buffer was left in, the drawn
/// sequence is a uniformly random ordered sample without replacement.
#[derive(Clone, Debug)]
pub struct PositionSampler {
    perm: Vec<usize>,
}

impl PositionSampler {
    pub fn new(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// At most `limit` distinct positions.
    pub fn draw<'a>(&'a mut self, limit: usize, rng: &'a mut RngStream) -> DistinctPositions<'a> {
        let limit = limit.min(self.perm.len());
        DistinctPositions {
            perm: &mut self.perm,
            rng,
            next: 0,
            limit,
        }
    }
}

pub struct DistinctPositions<'a> {
    perm: &'a mut [usize],
    rng: &'a mut RngStream,
    next: usize,
    limit: usize,
}

impl Iterator for DistinctPositions<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.next >= self.limit {
            return None;
        }
        let i = self.next;
        let j = i + self.rng.index(self.perm.len() - i);
        self.perm.swap(i, j);
        self.next += 1;
        Some(self.perm[i])
    }
}

/// Flips `positions` of the parent one after another.
///
/// With `CmMode::None` only the end point is evaluated. Otherwise every
/// intermediate point is evaluated and the walk stops at the first
/// constructive one.
pub fn hypermutate_along<O, I>(
    parent: &Individual,
    positions: I,
    cm_mode: CmMode,
    oracle: &mut O,
) -> Result<MutationResult, Stop>
where
    O: FitnessOracle,
    I: IntoIterator<Item = usize>,
{
    let mut y = parent.genotype.clone();
    if cm_mode == CmMode::None {
        for p in positions {
            y.flip(p);
        }
        let f = oracle.evaluate(&y)?;
        return Ok(MutationResult {
            offspring: parent.child(y, f),
            evals_used: 1,
            constructive: false,
        });
    }

    let mut evals = 0;
    let mut fitness = parent.fitness;
    let mut constructive = false;
    for p in positions {
        y.flip(p);
        fitness = oracle.evaluate(&y)?;
        evals += 1;
        if cm_mode.is_constructive(fitness, parent.fitness) {
            constructive = true;
            break;
        }
    }
    debug_assert!(evals > 0, "a hypermutation walk needs at least one step");
    Ok(MutationResult {
        offspring: parent.child(y, fitness),
        evals_used: evals,
        constructive,
    })
}

/// Static hypermutation with potential `potential` (see
/// [`mutation_potential`]): flips up to `potential` distinct uniformly chosen
/// bits, honouring `cm_mode`.
pub fn static_hypermutation<O: FitnessOracle>(
    parent: &Individual,
    potential: usize,
    cm_mode: CmMode,
    oracle: &mut O,
    rng: &mut RngStream,
    sampler: &mut PositionSampler,
) -> Result<MutationResult, Stop> {
    debug_assert_eq!(sampler.len(), parent.genotype.len());
    hypermutate_along(parent, sampler.draw(potential, rng), cm_mode, oracle)
}

/// Contiguous mutation of the 1-based inclusive region `[i, j]`, flipped in
/// increasing position order.
pub fn macromutate_region<O: FitnessOracle>(
    parent: &Individual,
    i: usize,
    j: usize,
    cm_mode: CmMode,
    oracle: &mut O,
) -> Result<MutationResult, Stop> {
    assert!(1 <= i && i <= j && j <= parent.genotype.len());
    hypermutate_along(parent, (i - 1)..j, cm_mode, oracle)
}

/// Hypermacromutation: `i` uniform in `[1, n-1]`, then `j` uniform in
/// `[i+1, n]`, then [`macromutate_region`]. For `n = 1` the single bit is the
/// region.
pub fn hypermacromutation<O: FitnessOracle>(
    parent: &Individual,
    cm_mode: CmMode,
    oracle: &mut O,
    rng: &mut RngStream,
) -> Result<MutationResult, Stop> {
    let n = parent.genotype.len();
    let (i, j) = if n < 2 {
        (1, 1)
    } else {
        let i = 1 + rng.index(n - 1);
        let j = i + 1 + rng.index(n - i);
        (i, j)
    };
    macromutate_region(parent, i, j, cm_mode, oracle)
}

/// Standard bit mutation with rate `1/n`.
///
/// The number of flipped bits is drawn from Binomial(n, 1/n) by inversion of a
/// table built with plain IEEE arithmetic, then that many distinct positions
/// are chosen uniformly. The result has exactly the distribution of flipping
/// every bit independently, at a cost proportional to the number of flips.
#[derive(Clone, Debug)]
pub struct Sbm {
    cdf: Vec<f64>,
    sampler: PositionSampler,
}

impl Sbm {
    pub fn new(n: usize) -> Self {
        assert!(n > 0);
        if n == 1 {
            // the single bit flips with probability 1
            return Self {
                cdf: vec![0.0, 1.0],
                sampler: PositionSampler::new(1),
            };
        }
        let p = 1.0 / n as f64;
        let q = 1.0 - p;
        let mut pmf = 1.0;
        for _ in 0..n {
            pmf *= q;
        }
        let mut cdf = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        for k in 0..=n {
            acc += pmf;
            cdf.push(acc);
            if k < n {
                pmf *= (n - k) as f64 / (k + 1) as f64 * p / q;
            }
        }
        Self {
            cdf,
            sampler: PositionSampler::new(n),
        }
    }

    pub fn flips(&self, rng: &mut RngStream) -> usize {
        let u = rng.unit();
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cdf.len() - 1)
    }

    pub fn apply(&mut self, x: &BitString, rng: &mut RngStream) -> BitString {
        let k = self.flips(rng);
        let mut y = x.clone();
        for p in self.sampler.draw(k, rng) {
            y.flip(p);
        }
        y
    }
}

/// One-shot standard bit mutation; hot loops should keep an [`Sbm`].
pub fn sbm(x: &BitString, rng: &mut RngStream) -> BitString {
    Sbm::new(x.len()).apply(x, rng)
}

/// Flips exactly one uniformly chosen bit.
pub fn rls_one(x: &BitString, rng: &mut RngStream) -> BitString {
    let mut y = x.clone();
    y.flip(rng.index(x.len()));
    y
}

/// With probability `p` a copy of `x`, otherwise [`rls_one`].
pub fn rls_p(x: &BitString, p: f64, rng: &mut RngStream) -> BitString {
    if rng.chance(p) {
        x.clone()
    } else {
        rls_one(x, rng)
    }
}

/// `dup` copies of every individual, ages and fitness preserved.
pub fn clone_population(population: &[Individual], dup: usize) -> Vec<Individual> {
    population
        .iter()
        .flat_map(|x| std::iter::repeat_n(x, dup))
        .cloned()
        .collect()
}

/// Hybrid ageing, in place: every age grows by one, then each individual
/// older than `tau` dies independently with probability `1 - 1/mu`.
pub fn hybrid_ageing(population: &mut Vec<Individual>, tau: AgeLimit, mu: usize, rng: &mut RngStream) {
    let p_die = 1.0 - 1.0 / mu as f64;
    population.retain_mut(|x| {
        x.age += 1;
        !(tau.exceeded_by(x.age) && rng.chance(p_die))
    });
}

/// Union of parents and offspring truncated to at most `mu`, without any
/// evaluation. With `div`, offspring that duplicate a parent genotype are
/// dropped first. Truncation removes lowest-fitness individuals with ties
/// broken uniformly at random.
pub fn select_survivors(
    parents: Vec<Individual>,
    mut offspring: Vec<Individual>,
    mu: usize,
    div: bool,
    rng: &mut RngStream,
) -> Vec<Individual> {
    if div {
        offspring.retain(|o| !parents.iter().any(|p| p.genotype == o.genotype));
    }
    let mut pool = parents;
    pool.append(&mut offspring);
    if pool.len() > mu {
        if mu + 1 == pool.len() {
            let worst = pool
                .iter()
                .map(|x| x.fitness)
                .fold(f64::INFINITY, f64::min);
            let ties: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].fitness == worst).collect();
            let victim = ties[rng.index(ties.len())];
            pool.swap_remove(victim);
        } else {
            // a uniform shuffle followed by a stable sort leaves equal-fitness
            // individuals in uniformly random order
            for i in (1..pool.len()).rev() {
                let j = rng.index(i + 1);
                pool.swap(i, j);
            }
            pool.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
            pool.truncate(mu);
        }
    }
    pool
}

/// Tops the population up to `mu` with fresh random age-0 individuals, each
/// charged one evaluation.
pub fn fill_population<O: FitnessOracle>(
    population: &mut Vec<Individual>,
    mu: usize,
    n: usize,
    oracle: &mut O,
    rng: &mut RngStream,
) -> Result<(), Stop> {
    while population.len() < mu {
        let x = Individual::random(n, oracle, rng)?;
        population.push(x);
    }
    Ok(())
}

/// Full selection step: [`select_survivors`] followed by [`fill_population`].
pub fn select<O: FitnessOracle>(
    parents: Vec<Individual>,
    offspring: Vec<Individual>,
    mu: usize,
    div: bool,
    n: usize,
    oracle: &mut O,
    rng: &mut RngStream,
) -> Result<Vec<Individual>, Stop> {
    let mut next = select_survivors(parents, offspring, mu, div, rng);
    fill_population(&mut next, mu, n, oracle, rng)?;
    Ok(next)
}
