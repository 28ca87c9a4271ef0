//! Threaded Monte Carlo. Shards are dealt round-robin to worker threads;
//! since each shard's draws depend only on the seed and its index, the
//! summed failure count is the same for any thread count.

use std::num::NonZeroUsize;
use std::thread;

use stochcover_core::oracle::{McEstimate, MonteCarloJob};

pub const THREADS_ENV: &str = "STOCHCOVER_THREADS";

/// Thread count from `STOCHCOVER_THREADS`, falling back to the machine's
/// available parallelism. Unparsable or zero values are ignored.
pub fn thread_budget() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

pub fn run_parallel(job: &MonteCarloJob, threads: usize) -> McEstimate {
    let shards = job.shard_count();
    let threads = (threads.max(1) as u64).min(shards.max(1));
    let failures: u64 = thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|t| scope.spawn(move || (t..shards).step_by(threads as usize).map(|i| job.run_shard(i)).sum::<u64>()))
            .collect();
        workers.into_iter().map(|w| w.join().expect("shard worker panicked")).sum()
    });
    job.estimate(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stochcover_core::generate::{generate_random_tree, ProbLaw, WeightLaw};

    #[test]
    fn thread_count_does_not_matter() {
        let inst = generate_random_tree(7, 3, ProbLaw::Uniform { low: 0.2, high: 0.8 }, WeightLaw::Integer { low: 1, high: 3 })
            .unwrap();
        let job = MonteCarloJob::new(&inst, 1, 2.0, 50_000, 9).unwrap();
        let one = run_parallel(&job, 1);
        for t in [2, 3, 8, 64] {
            assert_eq!(run_parallel(&job, t), one);
        }
    }
}
