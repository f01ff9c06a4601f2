//! The padded-instance benchmark: structural recognition against blind search.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::backdoor::{search_strong_backdoor, solve_via_backdoor, SearchLimits, SearchOutcome};
use crate::constructions::{extract_backdoor, pad_backdoor_family, recognize_backdoor_family};
use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Formula};
use crate::generate::random_cnf;
use crate::solver::dpll_solve;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchConfig {
    pub base_vars: u32,
    pub base_clauses: usize,
    pub width: usize,
    pub k: u32,
    pub count: usize,
    pub seed: u64,
    pub search_cap: usize,
    pub search_timeout: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchSummary {
    Found { size: usize },
    Exhausted { cap: usize },
    TimedOut { cap: usize },
}

impl std::fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchSummary::Found { size } => write!(f, "found:{size}"),
            SearchSummary::Exhausted { cap } => write!(f, "exhausted:{cap}"),
            SearchSummary::TimedOut { cap } => write!(f, "timeout:{cap}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchVerdict {
    Sat,
    Unsat,
    /// Strategies disagreed; never expected.
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub instance: usize,
    pub instance_seed: u64,
    pub total_vars: usize,
    pub k: u32,
    pub recognize_time: Duration,
    pub extract_time: Duration,
    pub backdoor_size: usize,
    pub guided_calls: u64,
    pub guided_time: Duration,
    pub dpll_time: Duration,
    pub search: SearchSummary,
    pub search_time: Duration,
    pub verdict: BenchVerdict,
}

impl BenchRecord {
    /// Blind search time over recognition plus extraction time.
    pub fn speedup(&self) -> f64 {
        let structural = (self.recognize_time + self.extract_time).as_secs_f64().max(1e-9);
        self.search_time.as_secs_f64() / structural
    }
}

const STRUCTURAL_REPEATS: usize = 5;

pub fn run_instance(config: &BenchConfig, instance: usize, instance_seed: u64) -> Result<BenchRecord> {
    let base = random_cnf(config.base_vars, config.base_clauses, config.width, instance_seed)?;
    let padded: CnfFormula = pad_backdoor_family(&base, config.k)?.padded;

    // Recognition takes microseconds, so report the fastest of a few runs.
    let mut recognize_time = Duration::MAX;
    let mut extract_time = Duration::MAX;
    let mut backdoor = Default::default();
    for _ in 0..STRUCTURAL_REPEATS {
        let start = Instant::now();
        let recognized = recognize_backdoor_family(&padded, config.k);
        recognize_time = recognize_time.min(start.elapsed());
        let inst =
            recognized.ok_or_else(|| Error::InvalidParameters("padded instance was not recognized".into()))?;
        let start = Instant::now();
        backdoor = extract_backdoor(&inst);
        extract_time = extract_time.min(start.elapsed());
    }

    let start = Instant::now();
    let guided = solve_via_backdoor(&padded, &backdoor)?;
    let guided_time = start.elapsed();

    let (dpll, stats) = dpll_solve(&padded);

    let limits = SearchLimits {
        size_cap: Some(config.search_cap),
        deadline: config.search_timeout.map(|t| Instant::now() + t),
    };
    let start = Instant::now();
    let outcome = search_strong_backdoor(&padded, limits);
    let search_time = start.elapsed();
    let search = match &outcome {
        SearchOutcome::Found { certificate, .. } => SearchSummary::Found {
            size: certificate.backdoor().len(),
        },
        SearchOutcome::Exhausted { cap, .. } => SearchSummary::Exhausted { cap: *cap },
        SearchOutcome::TimedOut { .. } => SearchSummary::TimedOut {
            cap: config.search_cap,
        },
    };

    let verdict = match (guided.result.is_sat(), dpll.is_sat()) {
        (true, true) => BenchVerdict::Sat,
        (false, false) => BenchVerdict::Unsat,
        _ => BenchVerdict::Conflict,
    };
    Ok(BenchRecord {
        instance,
        instance_seed,
        total_vars: padded.variables().len(),
        k: config.k,
        recognize_time,
        extract_time,
        backdoor_size: backdoor.len(),
        guided_calls: guided.calls,
        guided_time,
        dpll_time: stats.elapsed,
        search,
        search_time,
        verdict,
    })
}

/// Per-instance seeds drawn from a generator seeded with `config.seed`.
pub fn instance_seeds(config: &BenchConfig) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count).map(|_| rng.next_u64()).collect()
}

/// Runs every instance in order.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    instance_seeds(config)
        .into_iter()
        .enumerate()
        .map(|(i, s)| run_instance(config, i, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            base_vars: 5,
            base_clauses: 18,
            width: 3,
            k: 2,
            count: 4,
            seed: 3,
            search_cap: 1,
            search_timeout: None,
        }
    }

    #[test]
    fn small_bench_agrees() {
        let records = run_bench(&small()).unwrap();
        assert_eq!(records.len(), 4);
        for r in &records {
            assert_ne!(r.verdict, BenchVerdict::Conflict);
            assert_eq!(r.total_vars, 25);
            assert_eq!(r.backdoor_size, 5);
            assert!(r.guided_calls <= 32);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(instance_seeds(&small()), instance_seeds(&small()));
        let a: Vec<_> = run_bench(&small()).unwrap().into_iter().map(|r| (r.search, r.verdict, r.guided_calls)).collect();
        let b: Vec<_> = run_bench(&small()).unwrap().into_iter().map(|r| (r.search, r.verdict, r.guided_calls)).collect();
        assert_eq!(a, b);
    }
}
