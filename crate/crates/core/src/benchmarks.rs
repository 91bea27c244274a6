//! Pseudo-Boolean benchmark functions (all maximised).
//!
//! [`Benchmark`] names a function together with its parameters. It evaluates
//! points, knows its optimum predicate and optimal value, and has a plain-text
//! form such as `jump n=50 k=10` or `hypertrap n=64 gamma=0.125`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{ConfigError, ParseError};

pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_GAMMA: f64 = 0.125;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "function", rename_all = "lowercase")]
pub enum Benchmark {
    OneMax { n: usize },
    ZeroMax { n: usize },
    LeadingOnes { n: usize },
    Jump { n: usize, k: usize },
    Cliff { n: usize, d: usize },
    SimpleTrap { n: usize, z: f64, a: f64, b: f64 },
    HiddenPath { n: usize, epsilon: f64 },
    HyperTrap { n: usize, gamma: f64 },
}

pub fn onemax(x: &BitString) -> f64 {
    x.count_ones() as f64
}

pub fn zeromax(x: &BitString) -> f64 {
    x.count_zeros() as f64
}

pub fn leadingones(x: &BitString) -> f64 {
    x.leading_ones() as f64
}

pub fn jump(x: &BitString, k: usize) -> f64 {
    let n = x.len();
    let ones = x.count_ones();
    if ones <= n - k || ones == n {
        (k + ones) as f64
    } else {
        (n - ones) as f64
    }
}

pub fn cliff(x: &BitString, d: usize) -> f64 {
    let n = x.len();
    let ones = x.count_ones();
    if ones <= n - d {
        ones as f64
    } else {
        ones as f64 - d as f64 + 0.5
    }
}

pub fn simple_trap(x: &BitString, z: f64, a: f64, b: f64) -> f64 {
    let n = x.len() as f64;
    let ones = x.count_ones() as f64;
    if ones <= z {
        a / z * (z - ones)
    } else {
        b / (n - z) * (ones - z)
    }
}

/// `log2 n` for the power-of-two lengths HiddenPath accepts.
fn log2_exact(n: usize) -> usize {
    n.trailing_zeros() as usize
}

/// Whether `x` has the shape `1^(n-k) 0^k` for `k = |x|_0`.
fn is_ones_then_zeros(x: &BitString) -> bool {
    let ones = x.count_ones();
    x.count_ones_in(0, ones) == ones
}

pub fn hidden_path(x: &BitString, epsilon: f64) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let log_n = log2_exact(n);
    let zeros = x.count_zeros();
    if zeros == n {
        return 0.0;
    }
    if (5..=log_n + 1).contains(&zeros) && is_ones_then_zeros(x) {
        return nf - epsilon + epsilon * zeros as f64 / log_n as f64;
    }
    if zeros == n - 1 {
        return nf;
    }
    if zeros == 5 {
        let tail_zeros = 5 - x.count_ones_in(n - 5, n);
        return nf - epsilon + tail_zeros as f64 / nf;
    }
    if zeros < 5 {
        return 0.0;
    }
    zeros as f64
}

/// Minimum Hamming distance from `x` to the HyperTrap path points
/// `1^i 0^(n-i)` for `n/2 <= i < n`.
pub fn min_sp_distance(x: &BitString) -> usize {
    let n = x.len();
    let half = n / 2;
    assert!(half < n, "the path is empty for n < 2");
    // distance to 1^i 0^(n-i) = zeros in [0, i) + ones in [i, n)
    let mut dist = (half - x.count_ones_in(0, half)) + x.count_ones_in(half, n);
    let mut best = dist;
    for i in half..n - 1 {
        if x.get(i) {
            dist -= 1;
        } else {
            dist += 1;
        }
        best = best.min(dist);
    }
    best
}

fn hypertrap_threshold(n: usize, gamma: f64) -> usize {
    // ceil(gamma * n), tolerant of binary rounding in gamma
    (gamma * n as f64 - 1e-9).ceil().max(0.0) as usize
}

fn hypertrap_local_opt(x: &BitString, gamma: f64) -> bool {
    let n = x.len();
    4 * x.count_ones() >= 3 * n && min_sp_distance(x) >= hypertrap_threshold(n, gamma)
}

pub fn hypertrap(x: &BitString, gamma: f64) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let ones = x.count_ones();
    if ones == n {
        return nf.powi(4);
    }
    if hypertrap_local_opt(x, gamma) {
        return nf.powi(3);
    }
    if 2 * ones >= n && is_ones_then_zeros(x) {
        return nf * nf * ones as f64;
    }
    if 2 * ones == n {
        let weighted: usize = (0..n).filter(|&i| x.get(i)).map(|i| n - (i + 1)).sum();
        return nf / 2.0 + weighted as f64 / nf;
    }
    if 2 * ones < n {
        return ones as f64;
    }
    x.count_zeros() as f64
}

impl Benchmark {
    pub fn n(&self) -> usize {
        match *self {
            Benchmark::OneMax { n }
            | Benchmark::ZeroMax { n }
            | Benchmark::LeadingOnes { n }
            | Benchmark::Jump { n, .. }
            | Benchmark::Cliff { n, .. }
            | Benchmark::SimpleTrap { n, .. }
            | Benchmark::HiddenPath { n, .. }
            | Benchmark::HyperTrap { n, .. } => n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::OneMax { .. } => "onemax",
            Benchmark::ZeroMax { .. } => "zeromax",
            Benchmark::LeadingOnes { .. } => "leadingones",
            Benchmark::Jump { .. } => "jump",
            Benchmark::Cliff { .. } => "cliff",
            Benchmark::SimpleTrap { .. } => "simpletrap",
            Benchmark::HiddenPath { .. } => "hiddenpath",
            Benchmark::HyperTrap { .. } => "hypertrap",
        }
    }

    /// SimpleTrap with `z = floor(n/4)`, `b = n - z - 1` and `a = 2b`.
    pub fn simple_trap_default(n: usize) -> Self {
        let z = (n / 4) as f64;
        let b = n as f64 - z - 1.0;
        Benchmark::SimpleTrap { n, z, a: 2.0 * b, b }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.n();
        if n == 0 {
            return Err(ConfigError::range("n", "n must be positive"));
        }
        match *self {
            Benchmark::Jump { k, .. } if k < 1 || k > n => Err(ConfigError::range(
                "k",
                format!("need 1 <= k <= n = {n}, got {k}"),
            )),
            Benchmark::Cliff { d, .. } if d < 1 || d > n => Err(ConfigError::range(
                "d",
                format!("need 1 <= d <= n = {n}, got {d}"),
            )),
            Benchmark::HyperTrap { gamma, .. } => {
                if n % 4 != 0 {
                    return Err(ConfigError::range(
                        "n",
                        format!("hypertrap needs n divisible by 4, got {n}"),
                    ));
                }
                if !(gamma > 0.0 && gamma <= 0.125) {
                    return Err(ConfigError::range(
                        "gamma",
                        format!("need 0 < gamma <= 1/8, got {gamma}"),
                    ));
                }
                Ok(())
            }
            Benchmark::HiddenPath { epsilon, .. } => {
                if n < 32 || !n.is_power_of_two() {
                    return Err(ConfigError::range(
                        "n",
                        format!("hiddenpath needs a power of two n >= 32, got {n}"),
                    ));
                }
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(ConfigError::range(
                        "epsilon",
                        format!("need 0 < epsilon < 1, got {epsilon}"),
                    ));
                }
                Ok(())
            }
            Benchmark::SimpleTrap { z, a, b, .. } => {
                let nf = n as f64;
                if !(z > 0.0 && z < nf) {
                    return Err(ConfigError::range(
                        "z",
                        format!("need 0 < z < n = {n}, got {z}"),
                    ));
                }
                if (b - (nf - z - 1.0)).abs() > 1e-9 {
                    return Err(ConfigError::range(
                        "b",
                        format!("need b = n - z - 1 = {}, got {b}", nf - z - 1.0),
                    ));
                }
                if a < 1.5 * b - 1e-9 || a > 2.0 * b + 1e-9 {
                    return Err(ConfigError::range(
                        "a",
                        format!("need 3b/2 <= a <= 2b with b = {b}, got {a}"),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn evaluate(&self, x: &BitString) -> f64 {
        debug_assert_eq!(x.len(), self.n());
        match *self {
            Benchmark::OneMax { .. } => onemax(x),
            Benchmark::ZeroMax { .. } => zeromax(x),
            Benchmark::LeadingOnes { .. } => leadingones(x),
            Benchmark::Jump { k, .. } => jump(x, k),
            Benchmark::Cliff { d, .. } => cliff(x, d),
            Benchmark::SimpleTrap { z, a, b, .. } => simple_trap(x, z, a, b),
            Benchmark::HiddenPath { epsilon, .. } => hidden_path(x, epsilon),
            Benchmark::HyperTrap { gamma, .. } => hypertrap(x, gamma),
        }
    }

    pub fn is_optimum(&self, x: &BitString) -> bool {
        match *self {
            Benchmark::ZeroMax { .. } | Benchmark::SimpleTrap { .. } => x.is_all_zeros(),
            Benchmark::HiddenPath { n, .. } => {
                x.count_zeros() == log2_exact(n) + 1 && is_ones_then_zeros(x)
            }
            _ => x.is_all_ones(),
        }
    }

    pub fn optimum_value(&self) -> f64 {
        let nf = self.n() as f64;
        match *self {
            Benchmark::OneMax { .. } | Benchmark::ZeroMax { .. } | Benchmark::LeadingOnes { .. } => nf,
            Benchmark::Jump { k, .. } => nf + k as f64,
            Benchmark::Cliff { d, .. } => nf - d as f64 + 0.5,
            Benchmark::SimpleTrap { a, .. } => a,
            Benchmark::HiddenPath { n, epsilon } => {
                let log_n = log2_exact(n) as f64;
                nf - epsilon + epsilon * (log_n + 1.0) / log_n
            }
            Benchmark::HyperTrap { .. } => nf.powi(4),
        }
    }

    /// Membership in the named local-optimum set of the trap-like functions
    /// (`|x|_0 = n - 1` for HiddenPath, the far-from-path plateau for
    /// HyperTrap). Always false for the other functions.
    pub fn is_local_optimum(&self, x: &BitString) -> bool {
        match *self {
            Benchmark::HiddenPath { n, .. } => x.count_zeros() == n - 1,
            Benchmark::HyperTrap { gamma, .. } => !x.is_all_ones() && hypertrap_local_opt(x, gamma),
            _ => false,
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.name(), self.n())?;
        match *self {
            Benchmark::Jump { k, .. } => write!(f, " k={k}"),
            Benchmark::Cliff { d, .. } => write!(f, " d={d}"),
            Benchmark::SimpleTrap { z, a, b, .. } => write!(f, " z={z} a={a} b={b}"),
            Benchmark::HiddenPath { epsilon, .. } => write!(f, " epsilon={epsilon}"),
            Benchmark::HyperTrap { gamma, .. } => write!(f, " gamma={gamma}"),
            _ => Ok(()),
        }
    }
}

/// Parses `gamma`-style values given either as decimals or as `p/q`.
pub fn parse_real(s: &str) -> Result<f64, ParseError> {
    let bad = || ParseError::new(format!("invalid number {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        let q: f64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0.0 {
            return Err(bad());
        }
        Ok(p / q)
    } else {
        s.trim().parse().map_err(|_| bad())
    }
}

impl FromStr for Benchmark {
    type Err = ParseError;

    /// Grammar: `<function> n=<int> [<key>=<value> ...]`, whitespace separated.
    /// Unset optional parameters take their defaults (`epsilon=0.5`,
    /// `gamma=1/8`, SimpleTrap `z=floor(n/4)`, `b=n-z-1`, `a=2b`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = s.split_whitespace();
        let id = tokens
            .next()
            .ok_or_else(|| ParseError::new("empty benchmark spec"))?
            .to_ascii_lowercase();
        let mut params: Vec<(String, String)> = Vec::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| ParseError::new(format!("expected key=value, got {tok:?}")))?;
            params.push((k.to_ascii_lowercase(), v.to_string()));
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let int = |key: &'static str| -> Result<Option<usize>, ParseError> {
            get(key)
                .map(|v| {
                    v.parse::<usize>()
                        .map_err(|_| ParseError::new(format!("{key}: invalid integer {v:?}")))
                })
                .transpose()
        };
        let real = |key: &'static str| -> Result<Option<f64>, ParseError> {
            get(key).map(parse_real).transpose()
        };
        let required = |key: &'static str| -> Result<usize, ParseError> {
            int(key)?.ok_or_else(|| ParseError::new(format!("missing parameter {key}")))
        };

        let allowed: &[&str] = match id.as_str() {
            "jump" => &["n", "k"],
            "cliff" => &["n", "d"],
            "simpletrap" | "simple-trap" | "trap" => &["n", "z", "a", "b"],
            "hiddenpath" | "hidden-path" => &["n", "epsilon"],
            "hypertrap" | "hyper-trap" => &["n", "gamma"],
            _ => &["n"],
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(ParseError::new(format!("unknown parameter {k:?} for {id}")));
        }

        let n = required("n")?;
        let bench = match id.as_str() {
            "onemax" => Benchmark::OneMax { n },
            "zeromax" => Benchmark::ZeroMax { n },
            "leadingones" => Benchmark::LeadingOnes { n },
            "jump" => Benchmark::Jump { n, k: required("k")? },
            "cliff" => Benchmark::Cliff { n, d: required("d")? },
            "simpletrap" | "simple-trap" | "trap" => {
                let z = real("z")?.unwrap_or((n / 4) as f64);
                let b = real("b")?.unwrap_or(n as f64 - z - 1.0);
                let a = real("a")?.unwrap_or(2.0 * b);
                Benchmark::SimpleTrap { n, z, a, b }
            }
            "hiddenpath" | "hidden-path" => Benchmark::HiddenPath {
                n,
                epsilon: real("epsilon")?.unwrap_or(DEFAULT_EPSILON),
            },
            "hypertrap" | "hyper-trap" => Benchmark::HyperTrap {
                n,
                gamma: real("gamma")?.unwrap_or(DEFAULT_GAMMA),
            },
            other => return Err(ParseError::new(format!("unknown function {other:?}"))),
        };
        Ok(bench)
    }
}
