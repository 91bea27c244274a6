//! Acceptance suite: scaled-down runtime experiments with fixed seeds.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//! Criterion numbers given as arguments restrict the run, e.g.
//! `cargo test -p optia-core --test acceptance -- 3 7`.

use std::process::ExitCode;
use std::time::Instant;

use optia_core::algorithms::{run_with_population, AlgorithmConfig, RunRecord, Variation};
use optia_core::analysis::{
    fit_loglog, reference_slope, summarize, verify_ageing_survivors, verify_hypermutation_distribution,
};
use optia_core::benchmarks::Benchmark;
use optia_core::harness::{records_to_csv, result_to_json, run_experiment, ExperimentConfig};
use optia_core::operators::{AgeLimit, CmMode};
use optia_core::rng::{derive_seed, RngStream};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn experiment(algo: AlgorithmConfig, f: Benchmark, budget: u64, runs: usize, seed: u64) -> Vec<RunRecord> {
    let cfg = ExperimentConfig::new(algo, f, budget, runs, seed).with_parallelism(workers());
    run_experiment(&cfg).expect("acceptance configurations are valid").records
}

fn successes(records: &[RunRecord]) -> usize {
    records.iter().filter(|r| r.success).count()
}

fn median(records: &[RunRecord]) -> f64 {
    let mut e: Vec<u64> = records.iter().map(|r| r.evaluations_used).collect();
    e.sort_unstable();
    let m = e.len() / 2;
    if e.len() % 2 == 1 {
        e[m] as f64
    } else {
        (e[m - 1] + e[m]) as f64 / 2.0
    }
}

fn ceil_2n_ln_n(n: usize) -> u64 {
    (2.0 * n as f64 * (n as f64).ln()).ceil() as u64
}

/// Runs a sweep and fits the mean evaluations; `None` if any run failed.
fn sweep(algo: &AlgorithmConfig, make: impl Fn(usize) -> Benchmark, ns: &[usize], runs: usize, budget: u64, seed: u64) -> (Vec<(f64, f64)>, bool) {
    let mut points = Vec::new();
    let mut complete = true;
    for &n in ns {
        let recs = experiment(algo.clone(), make(n), budget, runs, seed ^ n as u64);
        let s = summarize(&recs).unwrap();
        complete &= s.success_rate == 1.0;
        if let Some(m) = s.mean_evals() {
            points.push((n as f64, m));
        }
    }
    (points, complete)
}

fn c1_reachability() -> Verdict {
    let mut rng = RngStream::new(101);
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in [10, 12] {
        for k in 1..=3 {
            let c = verify_hypermutation_distribution(n, k, 1_000_000, &mut rng);
            worst = worst.max(c.relative_error);
            pass &= c.pass;
        }
    }
    verdict(pass, format!("worst relative error {worst:.4} (tolerance 0.05)"))
}

fn c2_onemax_scaling() -> Verdict {
    let ns = [25, 50, 100, 200, 400];
    let window = (2.0, 2.5);
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, cm) in [CmMode::Strict, CmMode::NonStrict].into_iter().enumerate() {
        let (pts, complete) = sweep(&AlgorithmConfig::ia_hyp(1.0, cm), |n| Benchmark::OneMax { n }, &ns, 100, 1_000_000_000, 200 + i as u64);
        let slope = fit_loglog(&pts).map(|f| f.slope).unwrap_or(f64::NAN);
        pass &= complete && (window.0..=window.1).contains(&slope);
        parts.push(format!("{cm}: slope {slope:.3}, all succeeded {complete}"));
    }
    let exact = reference_slope(&ns.map(|n| n as f64), |n| n * n * n.ln()).unwrap();
    verdict(pass, format!("{}; n^2 log n itself fits {exact:.3}; window [2.0, 2.5]", parts.join("; ")))
}

fn c3_leadingones_scaling() -> Verdict {
    let ns = [25, 50, 100, 200];
    let (pts, complete) = sweep(
        &AlgorithmConfig::ia_hyp(1.0, CmMode::NonStrict),
        |n| Benchmark::LeadingOnes { n },
        &ns,
        50,
        10_000_000_000,
        300,
    );
    let slope = fit_loglog(&pts).map(|f| f.slope).unwrap_or(f64::NAN);
    verdict(
        complete && (2.8..=3.3).contains(&slope),
        format!("slope {slope:.3}, all succeeded {complete}; window [2.8, 3.3]"),
    )
}

fn c4_no_fcm_fails() -> Verdict {
    let recs = experiment(AlgorithmConfig::ia_hyp(0.5, CmMode::None), Benchmark::OneMax { n: 30 }, 10_000_000, 30, 400);
    let s = successes(&recs);
    verdict(s == 0, format!("{s}/30 successes (required 0)"))
}

fn c5_opt_ia_lower_bound() -> Verdict {
    let n = 100.0f64;
    let bound = n * n * ((n / 3.0).ln() / 2.0 - 1.0 / 3.0);
    let recs = experiment(
        AlgorithmConfig::opt_ia(1, 1, 1.0, AgeLimit::Unbounded),
        Benchmark::OneMax { n: 100 },
        100_000_000,
        50,
        500,
    );
    let s = summarize(&recs).unwrap();
    let mean = s.mean_evals().unwrap_or(f64::NAN);
    verdict(
        s.success_rate == 1.0 && mean >= bound,
        format!("mean {mean:.0} evaluations over {} successes, bound {bound:.0}", 50 - s.censored_count),
    )
}

fn c6_jump_speedup() -> Verdict {
    let f = Benchmark::Jump { n: 20, k: 5 };
    let hyp = experiment(AlgorithmConfig::ia_hyp(1.0, CmMode::NonStrict), f.clone(), 100_000_000, 30, 600);
    let ea = experiment(AlgorithmConfig::ea(), f, 100_000_000, 30, 601);
    let (mh, me) = (median(&hyp), median(&ea));
    verdict(
        mh <= me / 4.0,
        format!(
            "median IA^hyp {mh:.0} ({}/30 ok), median EA {me:.0} ({}/30 ok), ratio {:.3} (required <= 0.25)",
            successes(&hyp),
            successes(&ea),
            mh / me
        ),
    )
}

fn c7_rls_p_cliff() -> Verdict {
    let f = Benchmark::Cliff { n: 100, d: 20 };
    let tau = AgeLimit::Bounded(ceil_2n_ln_n(100));
    let ageing = experiment(AlgorithmConfig::rls_p_ageing(5, 0.25, tau), f.clone(), 10_000_000, 30, 700);
    let ea = experiment(AlgorithmConfig::ea(), f, 10_000_000, 30, 701);
    let (sa, se) = (successes(&ageing), successes(&ea));
    verdict(
        sa >= 27 && se == 0,
        format!("RLS_p ageing {sa}/30 (required >= 27), (1+1) EA {se}/30 (required 0)"),
    )
}

fn c8_ea_ageing_cliff() -> Verdict {
    let recs = experiment(
        AlgorithmConfig::ea_ageing(2, AgeLimit::Bounded(ceil_2n_ln_n(100))),
        Benchmark::Cliff { n: 100, d: 20 },
        10_000_000,
        30,
        800,
    );
    let s = successes(&recs);
    verdict(s >= 21, format!("{s}/30 successes (required >= 21)"))
}

fn c9_rls_div_cliff() -> Verdict {
    let recs = experiment(
        AlgorithmConfig::rls_ageing_div(3, AgeLimit::Bounded(300)),
        Benchmark::Cliff { n: 100, d: 20 },
        10_000_000,
        30,
        900,
    );
    let s = successes(&recs);
    verdict(s >= 24, format!("{s}/30 successes (required >= 24)"))
}

fn c10_hidden_path() -> Verdict {
    let f = Benchmark::HiddenPath { n: 64, epsilon: 0.5 };
    let tau = AgeLimit::Bounded(64 * 64 * 6);
    let budget = 50_000_000;
    let full = successes(&experiment(AlgorithmConfig::opt_ia(4, 1, 1.0, tau), f.clone(), budget, 20, 1000));
    let unbounded = successes(&experiment(AlgorithmConfig::opt_ia(4, 1, 1.0, AgeLimit::Unbounded), f.clone(), budget, 20, 1001));
    let sbm = successes(&experiment(
        AlgorithmConfig::opt_ia(4, 1, 1.0, tau).with_variation(Variation::Sbm),
        f,
        budget,
        20,
        1002,
    ));
    verdict(
        full >= 14 && unbounded <= 2 && sbm <= 2,
        format!("Opt-IA {full}/20 (required >= 14), tau=inf {unbounded}/20 (required <= 2), SBM+ageing {sbm}/20 (required <= 2)"),
    )
}

fn c11_hypertrap() -> Verdict {
    let f = Benchmark::HyperTrap { n: 64, gamma: 0.125 };
    let budget = 100_000_000;
    let ea = successes(&experiment(AlgorithmConfig::ea(), f.clone(), budget, 20, 1100));
    // evaluated run by run because the final population is needed
    let cfg = AlgorithmConfig::opt_ia(4, 1, 1.0, AgeLimit::Unbounded);
    let mut ia_ok = 0;
    let mut trapped = 0;
    for i in 0..20 {
        let (rec, pop) = run_with_population(&cfg, &f, budget, derive_seed(1101, i)).unwrap();
        if rec.success {
            ia_ok += 1;
        } else if pop.iter().any(|x| f.is_local_optimum(&x.genotype)) {
            trapped += 1;
        }
    }
    let failed = 20 - ia_ok;
    verdict(
        ea >= 18 && ia_ok <= 2 && trapped * 5 >= failed * 4,
        format!("(1+1) EA {ea}/20 (required >= 18), Opt-IA {ia_ok}/20 (required <= 2), trapped in LocalOpt {trapped}/{failed} failures (required >= 80%)"),
    )
}

fn c12_simple_trap() -> Verdict {
    let recs = experiment(
        AlgorithmConfig::opt_ia(10, 1, 1.0, AgeLimit::Bounded(2500)),
        Benchmark::simple_trap_default(50),
        1_000_000,
        40,
        1200,
    );
    let s = successes(&recs);
    verdict(s >= 38, format!("{s}/40 successes (required >= 38)"))
}

fn c13_ageing_distribution() -> Verdict {
    let mut rng = RngStream::new(1300);
    let mut parts = Vec::new();
    let mut pass = true;
    for mu in [2, 4, 8] {
        let c = verify_ageing_survivors(mu, 100_000, &mut rng);
        pass &= c.pass;
        parts.push(format!("mu={mu} p={:.3}", c.p_value));
    }
    verdict(pass, format!("{} (reject below 0.01)", parts.join(", ")))
}

fn c14_determinism() -> Verdict {
    let cases = [
        ExperimentConfig::new(AlgorithmConfig::ia_hyp(1.0, CmMode::Strict), Benchmark::OneMax { n: 50 }, 1_000_000_000, 16, 14),
        ExperimentConfig::new(
            AlgorithmConfig::opt_ia(10, 1, 1.0, AgeLimit::Bounded(2500)),
            Benchmark::simple_trap_default(50),
            1_000_000,
            8,
            1400,
        ),
        ExperimentConfig::new(
            AlgorithmConfig::rls_ageing_div(3, AgeLimit::Bounded(300)),
            Benchmark::Cliff { n: 100, d: 20 },
            10_000_000,
            8,
            1401,
        ),
    ];
    let mut pass = true;
    for cfg in &cases {
        let outputs: Vec<(String, String)> = [1, 2, 4]
            .iter()
            .map(|&p| {
                let r = run_experiment(&cfg.clone().with_parallelism(p)).unwrap();
                (result_to_json(&r), records_to_csv(&r.records))
            })
            .collect();
        pass &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    verdict(pass, format!("{} configurations, parallelism 1/2/4, JSON and CSV compared byte for byte", cases.len()))
}

/// Id, description, check, wall-clock limit in seconds.
type Criterion = (u32, &'static str, fn() -> Verdict, Option<f64>);

const CRITERIA: [Criterion; 14] = [
    (1, "hypermutation reaches a distance-k target with probability 1/C(n,k)", c1_reachability, Some(120.0)),
    (2, "(1+1) IA^hyp on OneMax scales as n^2 log n", c2_onemax_scaling, Some(600.0)),
    (3, "(1+1) IA^hyp on LeadingOnes scales as n^3", c3_leadingones_scaling, Some(900.0)),
    (4, "hypermutation without FCM fails on OneMax", c4_no_fcm_fails, None),
    (5, "Opt-IA on OneMax respects the evaluation lower bound", c5_opt_ia_lower_bound, None),
    (6, "hypermutation beats the (1+1) EA on Jump", c6_jump_speedup, None),
    (7, "RLS_p with ageing escapes Cliff, the elitist EA does not", c7_rls_p_cliff, None),
    (8, "(mu+1) EA with ageing optimises Cliff", c8_ea_ageing_cliff, None),
    (9, "(mu+1) RLS with ageing and genotype diversity optimises Cliff", c9_rls_div_cliff, None),
    (10, "HiddenPath needs both hypermutation and ageing", c10_hidden_path, None),
    (11, "HyperTrap traps Opt-IA but not the (1+1) EA", c11_hypertrap, None),
    (12, "Opt-IA optimises SimpleTrap", c12_simple_trap, None),
    (13, "hybrid ageing survivors follow Binomial(mu, 1/mu)", c13_ageing_distribution, None),
    (14, "results do not depend on parallelism", c14_determinism, None),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, check, limit) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let mut v = check();
        let secs = start.elapsed().as_secs_f64();
        if let Some(limit) = limit {
            v.pass &= secs < limit;
            v.detail.push_str(&format!("; time limit {limit:.0}s"));
        }
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {tag} {name}: {} [{secs:.1}s]", v.detail);
        failed += u32::from(!v.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
