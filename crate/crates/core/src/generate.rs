//! Seeded random instance generators.
//!
//! All generators draw from a ChaCha8 stream seeded with the given `u64`, so
//! identical arguments always produce identical instances on every platform.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{
    CoverSet, GraphInstance, InstanceError, KCenterInstance, SetCoverInstance, WeightedEdge,
};

/// How per-vertex (or per-element) presence probabilities are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbLaw {
    Constant(f64),
    /// Uniform on `[low, high)`.
    Uniform { low: f64, high: f64 },
}

/// How edge weights (or set costs) are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightLaw {
    Constant(f64),
    /// Uniform real on `[low, high)`.
    Uniform { low: f64, high: f64 },
    /// Uniform integer on `[low, high]`. Integer weights keep every path
    /// length exact and produce many tied distances.
    Integer { low: u32, high: u32 },
}

impl ProbLaw {
    fn validate(&self) -> Result<(), InstanceError> {
        let ok = match *self {
            ProbLaw::Constant(p) => (0.0..=1.0).contains(&p),
            ProbLaw::Uniform { low, high } => 0.0 <= low && low <= high && high <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(InstanceError::InvalidLaw("probabilities must lie in [0, 1] with low <= high"))
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ProbLaw::Constant(p) => p,
            ProbLaw::Uniform { low, high } => low + (high - low) * rng.gen::<f64>(),
        }
    }
}

impl WeightLaw {
    fn validate(&self, allow_zero: bool) -> Result<(), InstanceError> {
        let min_ok = |x: f64| if allow_zero { x >= 0.0 } else { x > 0.0 };
        let ok = match *self {
            WeightLaw::Constant(w) => w.is_finite() && min_ok(w),
            WeightLaw::Uniform { low, high } => {
                low.is_finite() && high.is_finite() && min_ok(low) && low <= high
            }
            WeightLaw::Integer { low, high } => min_ok(f64::from(low)) && low <= high,
        };
        if ok {
            Ok(())
        } else {
            Err(InstanceError::InvalidLaw("weights must be finite, nonnegative, with low <= high"))
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            WeightLaw::Constant(w) => w,
            WeightLaw::Uniform { low, high } => low + (high - low) * rng.gen::<f64>(),
            WeightLaw::Integer { low, high } => f64::from(rng.gen_range(low..=high)),
        }
    }
}

/// Random recursive tree: vertex `i > 0` attaches to a uniformly chosen
/// earlier vertex. Rooted at 0.
pub fn generate_random_tree(
    n: usize,
    seed: u64,
    prob_law: ProbLaw,
    weight_law: WeightLaw,
) -> Result<KCenterInstance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::Empty);
    }
    prob_law.validate()?;
    weight_law.validate(true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs: Vec<f64> = (0..n).map(|_| prob_law.sample(&mut rng)).collect();
    let edges = (1..n)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            WeightedEdge::new(parent, v, weight_law.sample(&mut rng))
        })
        .collect();
    KCenterInstance::new(probs, edges, None)
}

/// Random set system: each set includes each element independently with
/// probability `density` (and at least one element).
pub fn generate_random_setcover(
    n: usize,
    m: usize,
    seed: u64,
    prob_law: ProbLaw,
    cost_law: WeightLaw,
    density: f64,
) -> Result<SetCoverInstance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::Empty);
    }
    prob_law.validate()?;
    cost_law.validate(false)?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(InstanceError::InvalidLaw("set density must lie in (0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs: Vec<f64> = (0..n).map(|_| prob_law.sample(&mut rng)).collect();
    let sets = (0..m)
        .map(|_| {
            let mut members: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < density).collect();
            if members.is_empty() {
                members.push(rng.gen_range(0..n));
            }
            CoverSet {
                cost: cost_law.sample(&mut rng),
                members,
            }
        })
        .collect();
    SetCoverInstance::new(probs, sets)
}

/// Erdős–Rényi graph `G(n, edge_prob)` with every isolated vertex joined to
/// a random partner afterwards, so the result has no isolated vertices
/// (for `n >= 2`). All vertices get probability `p`.
pub fn generate_random_graph(
    n: usize,
    seed: u64,
    edge_prob: f64,
    p: f64,
) -> Result<GraphInstance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::Empty);
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(InstanceError::InvalidLaw("edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacent = alloc::vec![alloc::vec![false; n]; n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < edge_prob {
                adjacent[u][v] = true;
                adjacent[v][u] = true;
                edges.push((u, v));
            }
        }
    }
    if n >= 2 {
        for u in 0..n {
            if adjacent[u].iter().any(|&a| a) {
                continue;
            }
            let others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            let &v = others.choose(&mut rng).expect("n >= 2");
            adjacent[u][v] = true;
            adjacent[v][u] = true;
            edges.push((u.min(v), u.max(v)));
        }
    }
    GraphInstance::new(alloc::vec![p; n], edges)
}
