use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    closed_form_success, guard, OracleError, MAX_CENTER_ENUMERATION, MAX_SAMPLED_VERTICES,
    MAX_SUBSET_ENUMERATION,
};
use crate::instance::{KCenterInstance, VertexId};
use crate::tree::{DistanceMatrix, RootedTree};

/// Which vertices each candidate center reaches within `r`, as bitmasks.
#[derive(Debug, Clone)]
struct Reach {
    masks: Vec<u64>,
}

impl Reach {
    fn new(d: &DistanceMatrix, r: f64) -> Self {
        let n = d.n();
        let masks = (0..n)
            .map(|c| {
                (0..n)
                    .filter(|&v| d.get(c, v) <= r)
                    .fold(0u64, |m, v| m | 1 << v)
            })
            .collect();
        Reach { masks }
    }

    /// Whether `budget` centers can cover `target`. Branches on the lowest
    /// uncovered vertex over every center that reaches it.
    fn coverable(&self, target: u64, budget: usize) -> bool {
        if target == 0 {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let low = target.trailing_zeros() as usize;
        self.masks
            .iter()
            .filter(|&&m| m >> low & 1 == 1)
            .any(|&m| self.coverable(target & !m, budget - 1))
    }

    fn min_cover(&self, target: u64) -> usize {
        (0..).find(|&c| self.coverable(target, c)).expect("n centers always suffice")
    }
}

/// Best fixed center set of size `min(k, n)` by enumeration, with the
/// lexicographically smallest optimum on ties.
pub fn brute_force_nonadaptive_opt(
    d: &DistanceMatrix,
    probs: &[f64],
    k: usize,
    r: f64,
) -> Result<(f64, Vec<VertexId>), OracleError> {
    let n = d.n();
    guard("center-set enumeration", MAX_CENTER_ENUMERATION, n)?;
    let size = k.min(n);
    let mut combo: Vec<VertexId> = (0..size).collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    loop {
        let value = closed_form_success(d, &combo, probs, r);
        if value > best.0 {
            best = (value, combo.clone());
        }
        // next combination in lexicographic order
        let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
            break;
        };
        combo[i] += 1;
        for t in i + 1..size {
            combo[t] = combo[t - 1] + 1;
        }
    }
    Ok(best)
}

/// Fewest centers (anywhere in the tree) covering `subset` within `r`.
pub fn min_cover_size(d: &DistanceMatrix, subset: &[VertexId], r: f64) -> Result<usize, OracleError> {
    guard("exact min cover", MAX_CENTER_ENUMERATION, d.n())?;
    let target = subset.iter().fold(0u64, |m, &v| m | 1 << v);
    Ok(Reach::new(d, r).min_cover(target))
}

/// `Σ_S P(S) · 1[min-cover(S, r) > k]` over all `2^n` vertex subsets.
pub fn brute_force_adaptive_failure(
    d: &DistanceMatrix,
    probs: &[f64],
    k: usize,
    r: f64,
) -> Result<f64, OracleError> {
    let n = d.n();
    guard("subset enumeration", MAX_SUBSET_ENUMERATION, n)?;
    let reach = Reach::new(d, r);
    let mut failure = 0.0;
    for mask in 0u64..1 << n {
        if reach.coverable(mask, k) {
            continue;
        }
        let p: f64 = (0..n)
            .map(|v| if mask >> v & 1 == 1 { probs[v] } else { 1.0 - probs[v] })
            .product();
        failure += p;
    }
    Ok(failure)
}

/// Samples per Monte Carlo shard. Fixed, so the shard plan (and therefore
/// the estimate) depends only on the sample count and the seed.
pub const MC_SHARD_SIZE: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub failures: u64,
    pub samples: u64,
}

/// A Monte Carlo run split into independent shards. Shard `i` draws from
/// ChaCha8 stream `i` under the run seed, so shards can be evaluated in any
/// order or in parallel and summed to the same count.
#[derive(Debug, Clone)]
pub struct MonteCarloJob {
    reach: Reach,
    probs: Vec<f64>,
    k: usize,
    samples: u64,
    seed: u64,
}

impl MonteCarloJob {
    pub fn new(
        instance: &KCenterInstance,
        k: usize,
        r: f64,
        samples: u64,
        seed: u64,
    ) -> Result<Self, OracleError> {
        guard("sampled min cover", MAX_SAMPLED_VERTICES, instance.n())?;
        if samples == 0 {
            return Err(OracleError::InvalidArgument("at least one sample is required"));
        }
        let d = DistanceMatrix::from_tree(&RootedTree::new(instance));
        Ok(MonteCarloJob {
            reach: Reach::new(&d, r),
            probs: instance.probs().to_vec(),
            k,
            samples,
            seed,
        })
    }

    pub fn shard_count(&self) -> u64 {
        self.samples.div_ceil(MC_SHARD_SIZE)
    }

    /// Number of failed samples in shard `index`.
    pub fn run_shard(&self, index: u64) -> u64 {
        let start = index * MC_SHARD_SIZE;
        let count = MC_SHARD_SIZE.min(self.samples.saturating_sub(start));
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut failures = 0;
        for _ in 0..count {
            let mut mask = 0u64;
            for (v, &p) in self.probs.iter().enumerate() {
                if rng.gen::<f64>() < p {
                    mask |= 1 << v;
                }
            }
            if !self.reach.coverable(mask, self.k) {
                failures += 1;
            }
        }
        failures
    }

    pub fn estimate(&self, failures: u64) -> McEstimate {
        let est = failures as f64 / self.samples as f64;
        McEstimate {
            estimate: est,
            std_error: libm::sqrt(est * (1.0 - est) / self.samples as f64),
            failures,
            samples: self.samples,
        }
    }
}

/// Sequential Monte Carlo estimate of the adaptive failure probability.
pub fn monte_carlo_failure(
    instance: &KCenterInstance,
    k: usize,
    r: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, OracleError> {
    let job = MonteCarloJob::new(instance, k, r, samples, seed)?;
    let failures = (0..job.shard_count()).map(|i| job.run_shard(i)).sum();
    Ok(job.estimate(failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightedEdge;
    use alloc::vec;

    fn path3(probs: [f64; 3]) -> (KCenterInstance, DistanceMatrix) {
        let inst = KCenterInstance::new(
            probs.to_vec(),
            vec![WeightedEdge::new(0, 1, 1.0), WeightedEdge::new(1, 2, 1.0)],
            None,
        )
        .unwrap();
        let d = DistanceMatrix::from_tree(&RootedTree::new(&inst));
        (inst, d)
    }

    #[test]
    fn min_cover_examples() {
        let (_, d) = path3([1.0; 3]);
        assert_eq!(min_cover_size(&d, &[], 0.0).unwrap(), 0);
        assert_eq!(min_cover_size(&d, &[2], 0.0).unwrap(), 1);
        assert_eq!(min_cover_size(&d, &[0, 2], 1.0).unwrap(), 1);
        assert_eq!(min_cover_size(&d, &[0, 2], 0.5).unwrap(), 2);
    }

    #[test]
    fn nonadaptive_brute_force_cases() {
        let (inst, d) = path3([0.5, 0.0, 0.5]);
        let (p, c) = brute_force_nonadaptive_opt(&d, inst.probs(), 0, 1.0).unwrap();
        assert_eq!((p, c), (0.25, vec![]));
        let (p, c) = brute_force_nonadaptive_opt(&d, inst.probs(), 3, 0.0).unwrap();
        assert_eq!((p, c), (1.0, vec![0, 1, 2]));
        let (p, c) = brute_force_nonadaptive_opt(&d, inst.probs(), 1, 1.0).unwrap();
        assert_eq!((p, c), (1.0, vec![1]));
    }

    #[test]
    fn adaptive_brute_force_cases() {
        let (_, d) = path3([0.0; 3]);
        assert_eq!(brute_force_adaptive_failure(&d, &[0.0; 3], 0, 1.0).unwrap(), 0.0);
        let one = DistanceMatrix::from_rows(1, vec![0.0]);
        assert_eq!(brute_force_adaptive_failure(&one, &[0.5], 0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn size_guards() {
        let big = DistanceMatrix::from_rows(17, vec![0.0; 17 * 17]);
        assert!(matches!(
            brute_force_nonadaptive_opt(&big, &[0.5; 17], 2, 0.0),
            Err(OracleError::SizeGuard { limit: 16, actual: 17, .. })
        ));
        assert!(matches!(
            brute_force_adaptive_failure(&big, &[0.5; 17], 2, 0.0),
            Err(OracleError::SizeGuard { limit: 14, .. })
        ));
    }

    #[test]
    fn monte_carlo_degenerate() {
        let (inst, _) = path3([0.0; 3]);
        let est = monte_carlo_failure(&inst, 0, 0.0, 1000, 1).unwrap();
        assert_eq!((est.estimate, est.std_error), (0.0, 0.0));
        let (inst, _) = path3([1.0; 3]);
        assert_eq!(monte_carlo_failure(&inst, 1, 1.0, 500, 2).unwrap().estimate, 0.0);
        assert_eq!(monte_carlo_failure(&inst, 1, 0.5, 500, 2).unwrap().estimate, 1.0);
        assert!(monte_carlo_failure(&inst, 1, 0.5, 0, 2).is_err());
    }

    #[test]
    fn monte_carlo_single_vertex() {
        let inst = KCenterInstance::new(vec![0.5], vec![], None).unwrap();
        let est = monte_carlo_failure(&inst, 0, 0.0, 100_000, 11).unwrap();
        assert!((est.estimate - 0.5).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn shards_are_order_independent() {
        let (inst, _) = path3([0.4, 0.7, 0.5]);
        let job = MonteCarloJob::new(&inst, 1, 0.0, 30_000, 5).unwrap();
        let forward: u64 = (0..job.shard_count()).map(|i| job.run_shard(i)).sum();
        let backward: u64 = (0..job.shard_count()).rev().map(|i| job.run_shard(i)).sum();
        assert_eq!(forward, backward);
        assert_eq!(job.shard_count(), 4);
    }
}
