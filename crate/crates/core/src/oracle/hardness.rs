use alloc::vec;
use alloc::vec::Vec;

use super::{guard, OracleError, MAX_EDGE_COVER_GRAPH, MAX_HARDNESS_GRAPH, MAX_INDEPENDENT_SET_GRAPH};
use crate::instance::GraphInstance;

/// `(m, I)`: the maximum independent set size and how many independent sets
/// reach it.
pub fn count_max_independent_sets(g: &GraphInstance) -> Result<(usize, u64), OracleError> {
    let n = g.n();
    guard("independent-set enumeration", MAX_INDEPENDENT_SET_GRAPH, n)?;
    let adj = g.adjacency_masks();
    let mut best = (0usize, 0u64);
    for mask in 0u64..1 << n {
        let independent = (0..n).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        if !independent {
            continue;
        }
        let size = mask.count_ones() as usize;
        if size > best.0 {
            best = (size, 1);
        } else if size == best.0 {
            best.1 += 1;
        }
    }
    Ok(best)
}

fn reject_isolated(g: &GraphInstance) -> Result<(), OracleError> {
    match g.isolated_vertices().first() {
        Some(&v) => Err(OracleError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

/// Whether `budget` edges can touch every vertex of `target`.
fn edge_coverable(adj: &[u64], target: u64, budget: usize) -> bool {
    if target == 0 {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let u = target.trailing_zeros() as usize;
    let mut others = adj[u];
    while others != 0 {
        let w = others.trailing_zeros() as usize;
        others &= others - 1;
        if edge_coverable(adj, target & !(1 << u) & !(1 << w), budget - 1) {
            return true;
        }
    }
    false
}

/// Fewest edges touching every vertex of `subset`. Zero for the empty set.
pub fn min_edge_cover_size(g: &GraphInstance, subset: &[usize]) -> Result<usize, OracleError> {
    guard("edge-cover search", MAX_EDGE_COVER_GRAPH, g.n())?;
    reject_isolated(g)?;
    let adj = g.adjacency_masks();
    let target = subset.iter().fold(0u64, |m, &v| m | 1 << v);
    Ok((0..).find(|&b| edge_coverable(&adj, target, b)).expect("|S| edges always suffice"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCoverFailure {
    pub k: usize,
    pub p: f64,
    /// `counts[i]`: subsets of size `i` whose minimum edge cover exceeds `k`.
    pub counts: Vec<u64>,
    pub ln_failure: f64,
    pub failure: f64,
}

fn ln_term(count: u64, i: usize, n: usize, p: f64) -> f64 {
    libm::log(count as f64) + i as f64 * libm::log(p) + (n - i) as f64 * libm::log1p(-p)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + libm::log(terms.iter().map(|&t| libm::exp(t - top)).sum::<f64>())
}

/// Probability that a random vertex subset (each vertex present with
/// probability `p`) needs more than `k` edges to cover, with the per-size
/// failure counts. Sums run in log space.
pub fn edge_cover_failure(g: &GraphInstance, k: usize, p: f64) -> Result<EdgeCoverFailure, OracleError> {
    let n = g.n();
    guard("edge-cover failure table", MAX_EDGE_COVER_GRAPH, n)?;
    reject_isolated(g)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(OracleError::InvalidArgument("p must lie in [0, 1]"));
    }
    let adj = g.adjacency_masks();
    let mut counts = vec![0u64; n + 1];
    for mask in 0u64..1 << n {
        if !edge_coverable(&adj, mask, k) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    let terms: Vec<f64> = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(i, &c)| {
            // 0^0 and 1^0 are 1; log-space would give NaN
            if p == 0.0 {
                if i == 0 { 0.0 } else { f64::NEG_INFINITY }
            } else if p == 1.0 {
                if i == n { libm::log(c as f64) } else { f64::NEG_INFINITY }
            } else {
                ln_term(c, i, n, p)
            }
        })
        .collect();
    let ln_failure = log_sum_exp(&terms);
    Ok(EdgeCoverFailure {
        k,
        p,
        counts,
        ln_failure,
        failure: libm::exp(ln_failure),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardnessReport {
    pub n: usize,
    pub m: usize,
    pub independent_sets: u64,
    /// Size-`m` subsets needing at least `m` edges.
    pub n_m: u64,
    pub f_m: f64,
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Counts maximum independent sets both directly and through the edge-cover
/// failure probability at `p = 2^-n`, and checks that the scaled failure
/// probability brackets the count.
pub fn verify_hardness_sandwich(g: &GraphInstance) -> Result<HardnessReport, OracleError> {
    let n = g.n();
    guard("hardness sandwich", MAX_HARDNESS_GRAPH, n)?;
    reject_isolated(g)?;
    let (m, independent_sets) = count_max_independent_sets(g)?;
    let p = libm::ldexp(1.0, -(n as i32));
    // "needs at least m edges" is "needs more than m - 1"
    let table = edge_cover_failure(g, m - 1, p)?;
    let ln_base = m as f64 * libm::log(p) + (n - m) as f64 * libm::log1p(-p);
    let upper = libm::exp(table.ln_failure - ln_base);
    let lower = upper / 3.0;
    let count = independent_sets as f64;
    let tol = 1e-9 * count;
    Ok(HardnessReport {
        n,
        m,
        independent_sets,
        n_m: table.counts[m],
        f_m: table.failure,
        p,
        lower,
        upper,
        holds: lower <= count + tol && count <= upper + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> GraphInstance {
        GraphInstance::new(vec![0.5; n], edges.to_vec()).unwrap()
    }

    #[test]
    fn independent_set_examples() {
        assert_eq!(count_max_independent_sets(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap(), (1, 3));
        assert_eq!(count_max_independent_sets(&graph(3, &[(0, 1), (1, 2)])).unwrap(), (2, 1));
        assert_eq!(count_max_independent_sets(&graph(4, &[])).unwrap(), (4, 1));
    }

    #[test]
    fn edge_cover_sizes() {
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(min_edge_cover_size(&p4, &[]).unwrap(), 0);
        assert_eq!(min_edge_cover_size(&p4, &[0, 1, 2, 3]).unwrap(), 2);
        assert_eq!(min_edge_cover_size(&p4, &[0, 3]).unwrap(), 2);
        assert_eq!(min_edge_cover_size(&p4, &[1, 2]).unwrap(), 1);
    }

    #[test]
    fn triangle_fails_at_zero_with_certain_vertices() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let t = edge_cover_failure(&k3, 0, 1.0).unwrap();
        assert_eq!(t.failure, 1.0);
        assert_eq!(t.counts, vec![0, 3, 3, 1]);
    }

    #[test]
    fn failure_matches_direct_sum() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let t = edge_cover_failure(&g, 1, 0.3).unwrap();
        let direct: f64 = t
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * libm::pow(0.3, i as f64) * libm::pow(0.7, (4 - i) as f64))
            .sum();
        assert!((t.failure - direct).abs() < 1e-14);
    }

    #[test]
    fn sandwich_small_graphs() {
        let k2 = verify_hardness_sandwich(&graph(2, &[(0, 1)])).unwrap();
        assert_eq!((k2.m, k2.independent_sets, k2.n_m), (1, 2, 2));
        assert!(k2.holds);
        let k3 = verify_hardness_sandwich(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!((k3.m, k3.independent_sets), (1, 3));
        assert_eq!(k3.p, 0.125);
        assert!(k3.holds);
    }

    #[test]
    fn isolated_vertices_rejected() {
        let g = graph(3, &[(0, 1)]);
        assert_eq!(edge_cover_failure(&g, 0, 0.5), Err(OracleError::IsolatedVertex(2)));
        assert_eq!(verify_hardness_sandwich(&graph(2, &[])), Err(OracleError::IsolatedVertex(0)));
    }
}
