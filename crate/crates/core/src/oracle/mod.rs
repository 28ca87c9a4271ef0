//! Ground-truth engines used to check the solvers.
//!
//! Everything here works by exhaustive enumeration or plain sampling over
//! the distance matrix, never through the dynamic programs. Size guards are
//! hard errors: an oracle either returns the exact value or refuses.

mod hardness;
mod kcenter;
mod setcover;

pub use hardness::{
    count_max_independent_sets, edge_cover_failure, min_edge_cover_size, verify_hardness_sandwich,
    EdgeCoverFailure, HardnessReport,
};
pub use kcenter::{
    brute_force_adaptive_failure, brute_force_nonadaptive_opt, min_cover_size,
    monte_carlo_failure, McEstimate, MonteCarloJob, MC_SHARD_SIZE,
};
pub use setcover::brute_force_setcover_opt;

use crate::instance::VertexId;
use crate::tree::DistanceMatrix;

/// Largest vertex count for center-set enumeration and exact min covers.
pub const MAX_CENTER_ENUMERATION: usize = 16;
/// Largest vertex count for the `2^n` subset enumeration of the adaptive
/// failure probability.
pub const MAX_SUBSET_ENUMERATION: usize = 14;
/// Largest set count for set-cover enumeration.
pub const MAX_SET_ENUMERATION: usize = 20;
/// Largest graph for independent-set counting.
pub const MAX_INDEPENDENT_SET_GRAPH: usize = 20;
/// Largest graph for the edge-cover failure table.
pub const MAX_EDGE_COVER_GRAPH: usize = 14;
/// Largest graph for the hardness sandwich check.
pub const MAX_HARDNESS_GRAPH: usize = 12;
/// Bitmask width used by the samplers.
pub const MAX_SAMPLED_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{what} needs at most {limit} items, got {actual}")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("vertex {0} is isolated, edge covers are undefined")]
    IsolatedVertex(VertexId),
    #[error("no selection satisfies the chance constraint")]
    Infeasible,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub(crate) fn guard(what: &'static str, limit: usize, actual: usize) -> Result<(), OracleError> {
    if actual > limit {
        Err(OracleError::SizeGuard {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}

/// `Π_{v : d(v, C) > r} (1 - p_v)`: the probability that no vertex farther
/// than `r` from every center is present. With no centers every vertex
/// counts as uncovered.
pub fn closed_form_success(d: &DistanceMatrix, centers: &[VertexId], probs: &[f64], r: f64) -> f64 {
    (0..d.n())
        .filter(|&v| !centers.iter().any(|&c| d.get(v, c) <= r))
        .map(|v| 1.0 - probs[v])
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path_matrix() -> DistanceMatrix {
        DistanceMatrix::from_rows(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0])
    }

    #[test]
    fn closed_form_cases() {
        let d = path_matrix();
        assert_eq!(closed_form_success(&d, &[1], &[0.9, 0.9, 0.9], 1.0), 1.0);
        assert_eq!(closed_form_success(&d, &[0], &[0.0, 0.0, 0.25], 1.0), 0.75);
        let none = closed_form_success(&d, &[], &[0.5, 0.0, 0.5], 1.0);
        assert_eq!(none, 0.25);
    }

    #[test]
    fn closed_form_equals_subset_enumeration() {
        let d = path_matrix();
        let probs = [0.3, 0.6, 0.8];
        for centers in [&[][..], &[0][..], &[2][..], &[0, 2][..]] {
            for r in [0.0, 1.0, 2.0] {
                let mut total = 0.0;
                for mask in 0u32..8 {
                    let mut prob = 1.0;
                    let mut covered = true;
                    for v in 0..3 {
                        if mask >> v & 1 == 1 {
                            prob *= probs[v];
                            covered &= centers.iter().any(|&c| d.get(v, c) <= r);
                        } else {
                            prob *= 1.0 - probs[v];
                        }
                    }
                    if covered {
                        total += prob;
                    }
                }
                let closed = closed_form_success(&d, centers, &probs, r);
                assert!((total - closed).abs() < 1e-15);
            }
        }
    }
}
