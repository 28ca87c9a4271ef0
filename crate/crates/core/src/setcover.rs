//! Chance-constrained set cover.
//!
//! Leaving element `j` uncovered costs a penalty `l_j = -ln(1 - p_j)`, and a
//! selection meets `P(some present element is uncovered) <= rho` exactly
//! when its uncovered penalty is at most `l = -ln(1 - rho)`. Elements with
//! `p_j = 1` get an infinite penalty and must be covered outright. The
//! resulting partial cover problem is solved greedily; the answer is then
//! certified against the probability itself.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{CoverSet, SetCoverInstance};
use crate::{check_rho, SolveError};

/// Slack on penalty-budget and probability comparisons.
pub const PROBABILITY_SLACK: f64 = 1e-12;

/// Set system with per-element penalties and a penalty budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialCoverInstance {
    sets: Vec<CoverSet>,
    penalties: Vec<f64>,
    budget: f64,
}

impl PartialCoverInstance {
    pub fn sets(&self) -> &[CoverSet] {
        &self.sets
    }

    /// `penalties[j]` is `+inf` for mandatory elements.
    pub fn penalties(&self) -> &[f64] {
        &self.penalties
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn is_mandatory(&self, element: usize) -> bool {
        self.penalties[element] == f64::INFINITY
    }

    fn covered_mask(&self, chosen: &[usize]) -> Vec<bool> {
        let mut covered = vec![false; self.penalties.len()];
        for &i in chosen {
            for &e in &self.sets[i].members {
                covered[e] = true;
            }
        }
        covered
    }

    /// Total penalty of the elements `chosen` leaves uncovered.
    pub fn uncovered_penalty(&self, chosen: &[usize]) -> f64 {
        let covered = self.covered_mask(chosen);
        residual(&self.penalties, &covered)
    }

    pub fn within_budget(&self, chosen: &[usize]) -> bool {
        self.uncovered_penalty(chosen) <= self.budget + PROBABILITY_SLACK
    }
}

fn residual(penalties: &[f64], covered: &[bool]) -> f64 {
    penalties
        .iter()
        .zip(covered)
        .filter(|&(_, &c)| !c)
        .map(|(&l, _)| l)
        .fold(0.0, |acc, l| acc + l)
}

/// Penalty form of `instance` at risk level `rho`.
pub fn to_partial_cover(instance: &SetCoverInstance, rho: f64) -> Result<PartialCoverInstance, SolveError> {
    check_rho(rho)?;
    let penalties: Vec<f64> = instance.element_probs().iter().map(|&p| -libm::log1p(-p)).collect();
    let stranded = instance.uncoverable_elements();
    if stranded.iter().any(|&e| penalties[e] == f64::INFINITY) {
        return Err(SolveError::Infeasible);
    }
    Ok(PartialCoverInstance {
        sets: instance.sets().to_vec(),
        penalties,
        budget: -libm::log1p(-rho),
    })
}

/// Index of the set with the best `gain / cost`, smallest index on ties.
/// `None` when no set gains anything.
fn best_ratio(pc: &PartialCoverInstance, covered: &[bool], gain: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (i, set) in pc.sets.iter().enumerate() {
        let g: f64 = set.members.iter().filter(|&&e| !covered[e]).map(|&e| gain(e)).sum();
        if g <= 0.0 {
            continue;
        }
        let ratio = g / set.cost;
        if best.is_none_or(|(b, _)| ratio > b) {
            best = Some((ratio, i));
        }
    }
    best.map(|(_, i)| i)
}

fn take(covered: &mut [bool], set: &CoverSet) {
    for &e in &set.members {
        covered[e] = true;
    }
}

/// Greedy partial cover.
///
/// Mandatory elements are covered first, by the set covering the most of
/// them per unit cost. Then sets are picked by uncovered penalty per unit
/// cost until the residual fits the budget. At every step of the second
/// phase the cheapest single set that would finish the job is also tried,
/// and the cheaper of the two outcomes is kept. Redundant sets are finally
/// dropped in reverse pick order. Returns the chosen set ids in ascending
/// order.
pub fn greedy_partial_cover(pc: &PartialCoverInstance) -> Result<Vec<usize>, SolveError> {
    let n = pc.penalties.len();
    let mut covered = vec![false; n];
    let mut picks: Vec<usize> = Vec::new();

    while (0..n).any(|e| !covered[e] && pc.is_mandatory(e)) {
        let i = best_ratio(pc, &covered, |e| if pc.is_mandatory(e) { 1.0 } else { 0.0 })
            .ok_or(SolveError::Infeasible)?;
        take(&mut covered, &pc.sets[i]);
        picks.push(i);
    }

    let limit = pc.budget + PROBABILITY_SLACK;
    let mut best_finish: Option<(f64, Vec<usize>)> = None;
    while residual(&pc.penalties, &covered) > limit {
        let spent: f64 = picks.iter().map(|&i| pc.sets[i].cost).sum();
        for (i, set) in pc.sets.iter().enumerate() {
            let left: f64 = residual(&pc.penalties, &covered)
                - set.members.iter().filter(|&&e| !covered[e]).map(|&e| pc.penalties[e]).sum::<f64>();
            let total = spent + set.cost;
            if left <= limit && best_finish.as_ref().is_none_or(|(c, _)| total < *c) {
                let mut sol = picks.clone();
                sol.push(i);
                best_finish = Some((total, sol));
            }
        }
        let i = best_ratio(pc, &covered, |e| pc.penalties[e]).ok_or(SolveError::Infeasible)?;
        take(&mut covered, &pc.sets[i]);
        picks.push(i);
    }

    let greedy_cost: f64 = picks.iter().map(|&i| pc.sets[i].cost).sum();
    if let Some((cost, sol)) = best_finish {
        if cost < greedy_cost {
            picks = sol;
        }
    }
    Ok(prune(pc, picks))
}

fn prune(pc: &PartialCoverInstance, mut picks: Vec<usize>) -> Vec<usize> {
    for pos in (0..picks.len()).rev() {
        let mut without = picks.clone();
        without.remove(pos);
        if pc.within_budget(&without) {
            picks = without;
        }
    }
    picks.sort_unstable();
    picks
}

/// `1 - Π (1 - p_j)` over the elements `chosen` leaves uncovered.
pub fn exact_violation_probability(instance: &SetCoverInstance, chosen: &[usize]) -> f64 {
    let probs = instance.element_probs();
    let kept: f64 = instance.uncovered_by(chosen).iter().map(|&e| 1.0 - probs[e]).product();
    1.0 - kept
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    pub cost: f64,
    pub uncovered: Vec<usize>,
    pub violation: f64,
}

/// Cheap selection of sets whose uncovered elements are all absent with
/// probability at least `1 - rho`.
pub fn solve_chance_setcover(instance: &SetCoverInstance, rho: f64) -> Result<CoverSolution, SolveError> {
    let pc = to_partial_cover(instance, rho)?;
    let mut chosen = greedy_partial_cover(&pc)?;
    // The penalty sum and the product can round differently right at the
    // boundary; keep adding the best remaining set until the product agrees.
    while exact_violation_probability(instance, &chosen) > rho + PROBABILITY_SLACK {
        let covered = pc.covered_mask(&chosen);
        let i = best_ratio(&pc, &covered, |e| pc.penalties[e]).ok_or(SolveError::Infeasible)?;
        chosen.push(i);
        chosen.sort_unstable();
    }
    Ok(CoverSolution {
        cost: instance.cost_of(&chosen),
        uncovered: instance.uncovered_by(&chosen),
        violation: exact_violation_probability(instance, &chosen),
        chosen,
    })
}
