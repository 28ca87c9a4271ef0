//! Solvers and ground-truth oracles for chance-constrained covering problems
//! under independent (product) element distributions.
//!
//! * [`nonadaptive`]: exact tree-metric k-center that maximizes the
//!   probability that every present vertex lies within `r` of a fixed center
//!   set, plus the binary search for the smallest feasible radius.
//! * [`adaptive`]: exact failure probability of the adaptive k-center
//!   problem on trees, where centers are picked after the random subset is
//!   revealed, and the value-at-risk radius built on top of it.
//! * [`setcover`]: chance-constrained set cover through its exact
//!   reformulation as a partial cover with logarithmic penalties.
//! * [`oracle`]: exhaustive and Monte Carlo reference engines, and the
//!   counting quantities behind the edge-cover hardness reduction.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and threaded Monte Carlo live in the `stochcover` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adaptive;
pub mod generate;
pub mod instance;
pub mod nonadaptive;
pub mod oracle;
pub mod setcover;
pub mod tree;

pub use adaptive::{failure_probability, solve_adaptive_var, Profile, ProfileDistribution, VarResult};
pub use instance::{
    CoverSet, GraphInstance, InstanceError, KCenterInstance, ProblemInstance, SetCoverInstance,
    VertexId, WeightedEdge,
};
pub use nonadaptive::{max_success_probability, solve_nonadaptive, CenterSolution, SuccessTable};
pub use setcover::{
    exact_violation_probability, greedy_partial_cover, solve_chance_setcover, to_partial_cover, CoverSolution,
    PartialCoverInstance,
};
pub use tree::{candidate_radii, DistanceMatrix, RadiusCandidates, RootedTree};

/// Slack applied when comparing a success probability against `1 - rho`.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Failure reported by the k-center solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("risk level {0} is outside (0, 1]")]
    InvalidRisk(f64),
    #[error("no candidate radius satisfies the chance constraint")]
    Infeasible,
}

pub(crate) fn check_rho(rho: f64) -> Result<(), SolveError> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(SolveError::InvalidRisk(rho))
    }
}
