//! Wall-clock scaling runs over seeded random trees.

use std::time::Instant;

use stochcover_core::generate::{generate_random_tree, ProbLaw, WeightLaw};
use stochcover_core::{solve_adaptive_var, solve_nonadaptive, InstanceError, SolveError};

use crate::report::BenchCell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Nonadaptive,
    Adaptive,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Nonadaptive => "nonadaptive",
            Suite::Adaptive => "adaptive",
        }
    }
}

/// Trees used by the benchmarks: real weights, so almost every pairwise
/// distance is a distinct candidate radius.
pub fn bench_tree(n: usize, seed: u64) -> Result<stochcover_core::KCenterInstance, InstanceError> {
    generate_random_tree(
        n,
        seed,
        ProbLaw::Uniform { low: 0.0, high: 0.3 },
        WeightLaw::Uniform { low: 1.0, high: 10.0 },
    )
}

/// Seconds for one full radius search. An infeasible outcome still counts:
/// the search ran to completion.
pub fn time_solve(suite: Suite, n: usize, k: usize, rho: f64, seed: u64) -> Result<f64, InstanceError> {
    let inst = bench_tree(n, seed)?;
    let start = Instant::now();
    let outcome = match suite {
        Suite::Nonadaptive => solve_nonadaptive(&inst, k, rho).map(|_| ()),
        Suite::Adaptive => solve_adaptive_var(&inst, k, rho).map(|_| ()),
    };
    let seconds = start.elapsed().as_secs_f64();
    debug_assert!(matches!(outcome, Ok(()) | Err(SolveError::Infeasible)));
    Ok(seconds)
}

/// Runs every `(n, k)` cell, keeping the fastest of `repeats` runs.
pub fn run_suite(
    suite: Suite,
    sizes: &[usize],
    ks: &[usize],
    rho: f64,
    seed: u64,
    repeats: usize,
) -> Result<Vec<BenchCell>, InstanceError> {
    let mut cells = Vec::new();
    for &k in ks {
        for &n in sizes {
            let mut best = f64::INFINITY;
            for _ in 0..repeats.max(1) {
                best = best.min(time_solve(suite, n, k, rho, seed)?);
            }
            cells.push(BenchCell { n, k, seconds: best });
        }
    }
    Ok(cells)
}

/// Least-squares slope of `ln seconds` against `ln n`, fitted separately
/// for each `k` and averaged. `None` without two distinct sizes.
pub fn growth_exponent(cells: &[BenchCell]) -> Option<f64> {
    let mut ks: Vec<usize> = cells.iter().map(|c| c.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let slopes: Vec<f64> = ks
        .iter()
        .filter_map(|&k| {
            let pts: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| c.k == k && c.seconds > 0.0)
                .map(|c| ((c.n as f64).ln(), c.seconds.ln()))
                .collect();
            let len = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            (pts.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
        })
        .collect();
    (!slopes.is_empty()).then(|| slopes.iter().sum::<f64>() / slopes.len() as f64)
}
