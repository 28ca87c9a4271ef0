use alloc::vec::Vec;

use super::{guard, OracleError, MAX_SAMPLED_VERTICES, MAX_SET_ENUMERATION};
use crate::instance::SetCoverInstance;

/// Cheapest selection whose exact violation probability is at most `rho`,
/// by enumerating all `2^m` selections. Ties go to the smallest selection
/// bitmask.
pub fn brute_force_setcover_opt(
    instance: &SetCoverInstance,
    rho: f64,
) -> Result<(f64, Vec<usize>), OracleError> {
    guard("set enumeration", MAX_SET_ENUMERATION, instance.m())?;
    guard("element bitmask", MAX_SAMPLED_VERTICES, instance.n())?;
    let n = instance.n();
    let masks: Vec<u64> = instance
        .sets()
        .iter()
        .map(|s| s.members.iter().fold(0u64, |m, &e| m | 1 << e))
        .collect();
    let probs = instance.element_probs();
    let mut best: Option<(f64, u64)> = None;
    for selection in 0u64..1 << instance.m() {
        let mut covered = 0u64;
        let mut cost = 0.0;
        for (i, &m) in masks.iter().enumerate() {
            if selection >> i & 1 == 1 {
                covered |= m;
                cost += instance.sets()[i].cost;
            }
        }
        if best.is_some_and(|(c, _)| cost >= c) {
            continue;
        }
        let kept: f64 = (0..n)
            .filter(|&e| covered >> e & 1 == 0)
            .map(|e| 1.0 - probs[e])
            .product();
        if 1.0 - kept <= rho + crate::setcover::PROBABILITY_SLACK {
            best = Some((cost, selection));
        }
    }
    let (cost, selection) = best.ok_or(OracleError::Infeasible)?;
    let chosen = (0..instance.m()).filter(|&i| selection >> i & 1 == 1).collect();
    Ok((cost, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CoverSet;
    use alloc::vec;

    #[test]
    fn vacuous_risk_picks_nothing() {
        let inst = SetCoverInstance::new(
            vec![0.9, 0.9],
            vec![CoverSet { cost: 1.0, members: vec![0, 1] }],
        )
        .unwrap();
        assert_eq!(brute_force_setcover_opt(&inst, 1.0).unwrap(), (0.0, vec![]));
    }

    #[test]
    fn mandatory_element() {
        let inst = SetCoverInstance::new(
            vec![1.0, 0.0],
            vec![
                CoverSet { cost: 2.0, members: vec![1] },
                CoverSet { cost: 3.0, members: vec![0] },
            ],
        )
        .unwrap();
        assert_eq!(brute_force_setcover_opt(&inst, 0.1).unwrap(), (3.0, vec![1]));
    }

    #[test]
    fn infeasible_when_mandatory_uncoverable() {
        let inst = SetCoverInstance::new(vec![1.0], vec![]).unwrap();
        assert_eq!(brute_force_setcover_opt(&inst, 0.5), Err(OracleError::Infeasible));
    }
}
