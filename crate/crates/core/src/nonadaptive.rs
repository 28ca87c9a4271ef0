//! Non-adaptive stochastic k-center on tree metrics.
//!
//! For a fixed radius `r` the solver maximizes, over center sets `C` with
//! `|C| <= k`, the probability that every present vertex is within `r` of
//! `C`. Two families of subproblems are tabulated bottom-up:
//!
//! * `H(T_v, j)`: best success probability for the subtree under `v` using
//!   `j` centers placed inside it.
//! * `R(T_{e(v1, l)}, j, v2)`: best success probability for `v1` together
//!   with its first `l` child subtrees, when `v2` (any vertex of the whole
//!   tree) is a center closest to `v1` and `j - 1` further centers are placed
//!   inside the part.
//!
//! Once `v2` is the closest center to the root of a part, centers in sibling
//! parts can never cover something `v2` does not, so the parts multiply
//! independently. The total work per radius is `O(n^2 k^2)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{KCenterInstance, VertexId};
use crate::tree::{candidate_radii, DistanceMatrix, RootedTree};
use crate::{check_rho, SolveError, FEASIBILITY_SLACK};

/// Tabulated `R` and `H` values for one `(k, r)`.
#[derive(Debug, Clone)]
pub struct SuccessTable {
    k: usize,
    r: f64,
    n: usize,
    /// First slot of each vertex; slot `slot_start[v] + l` holds the part
    /// `T_{e(v, l)}`.
    slot_start: Vec<usize>,
    /// Per slot, `(k + 1) * n` values indexed by `v2 * (k + 1) + j`.
    partial: Vec<Vec<f64>>,
    /// `(k + 1)` values per vertex.
    best: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Split {
    /// `v2` stays the closest center of the child subtree; the left part
    /// keeps `j1` centers counting `v2`.
    Shared(usize),
    /// The child subtree uses its own centers; the left part keeps `j2`.
    Own(usize),
}

impl SuccessTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// `H(T_v, j)` for `j <= k`.
    pub fn subtree_value(&self, v: VertexId, j: usize) -> f64 {
        self.best[v * (self.k + 1) + j]
    }

    /// `R(T_{e(v1, l)}, j, v2)`.
    pub fn part_value(&self, v1: VertexId, l: usize, j: usize, v2: VertexId) -> f64 {
        self.partial[self.slot_start[v1] + l][v2 * (self.k + 1) + j]
    }

    fn part(&self, v: VertexId, l: usize) -> &[f64] {
        &self.partial[self.slot_start[v] + l]
    }

    fn best_row(&self, v: VertexId) -> &[f64] {
        &self.best[v * (self.k + 1)..(v + 1) * (self.k + 1)]
    }

    fn best_closest(&self, tree: &RootedTree, v: VertexId, j: usize) -> (f64, VertexId) {
        let full = self.part(v, tree.children(v).len());
        let mut members = tree.subtree(v);
        members.sort_unstable();
        let mut best = (f64::NEG_INFINITY, v);
        for v2 in members {
            let value = full[v2 * (self.k + 1) + j];
            if value > best.0 {
                best = (value, v2);
            }
        }
        best
    }

    /// Walks the table back down to an optimal center set for `H(T, k)`.
    /// The result is sorted and has at most `k` vertices.
    pub fn reconstruct_centers(&self, tree: &RootedTree) -> Vec<VertexId> {
        enum Task {
            Subtree(VertexId, usize),
            Part(VertexId, usize, usize, VertexId),
        }
        let mut centers = Vec::new();
        let mut work = vec![Task::Subtree(tree.root(), self.k)];
        while let Some(task) = work.pop() {
            match task {
                Task::Subtree(_, 0) => {}
                Task::Subtree(v, j) => {
                    let (_, v2) = self.best_closest(tree, v, j);
                    centers.push(v2);
                    work.push(Task::Part(v, tree.children(v).len(), j, v2));
                }
                Task::Part(v1, 0, j, _) => {
                    if j >= 2 {
                        centers.push(v1);
                    }
                }
                Task::Part(v1, l, j, v2) => {
                    let v3 = tree.children(v1)[l - 1];
                    let (_, split) = best_split(
                        self.part(v1, l - 1),
                        self.part(v3, tree.children(v3).len()),
                        self.best_row(v3),
                        self.k + 1,
                        j,
                        v2,
                    );
                    match split {
                        Split::Shared(j1) => {
                            work.push(Task::Part(v1, l - 1, j1, v2));
                            work.push(Task::Part(v3, tree.children(v3).len(), j - j1 + 1, v2));
                        }
                        Split::Own(j2) => {
                            work.push(Task::Part(v1, l - 1, j2, v2));
                            work.push(Task::Subtree(v3, j - j2));
                        }
                    }
                }
            }
        }
        centers.sort_unstable();
        centers.dedup();
        centers
    }
}

/// Best value of `R(T_{e(v1, l)}, j, v2)` from the part without child `l`
/// (`prev`), the child's full part table and the child's `H` row. Ties go
/// to the shared branch, then to the smallest split index.
#[inline]
fn best_split(
    prev: &[f64],
    child_part: &[f64],
    child_best: &[f64],
    stride: usize,
    j: usize,
    v2: VertexId,
) -> (f64, Split) {
    let prev = &prev[v2 * stride..(v2 + 1) * stride];
    let child_part = &child_part[v2 * stride..(v2 + 1) * stride];
    let mut best = (f64::NEG_INFINITY, Split::Shared(1));
    for j1 in 1..=j {
        let value = prev[j1] * child_part[j - j1 + 1];
        if value > best.0 {
            best = (value, Split::Shared(j1));
        }
    }
    for j2 in 1..=j {
        let value = prev[j2] * child_best[j - j2];
        if value > best.0 {
            best = (value, Split::Own(j2));
        }
    }
    best
}

/// Runs the `H`/`R` recursion for radius `r` and returns `H(T, k)` with the
/// full table. `k` larger than `n` is clamped to `n`.
pub fn max_success_probability(
    tree: &RootedTree,
    d: &DistanceMatrix,
    probs: &[f64],
    k: usize,
    r: f64,
) -> (f64, SuccessTable) {
    let n = tree.n();
    let k = k.min(n);
    let width = (k + 1) * n;

    let mut slot_start = vec![0; n];
    let mut slots = 0;
    for v in 0..n {
        slot_start[v] = slots;
        slots += tree.children(v).len() + 1;
    }
    let mut partial = vec![Vec::new(); slots];
    let mut best = vec![0.0; n * (k + 1)];
    let mut members = Vec::new();

    for &v1 in tree.postorder() {
        let mut leaf = vec![0.0; width];
        for v2 in 0..n {
            if k >= 1 {
                leaf[v2 * (k + 1) + 1] = if d.get(v1, v2) <= r { 1.0 } else { 1.0 - probs[v1] };
            }
            for j in 2..=k {
                leaf[v2 * (k + 1) + j] = 1.0;
            }
        }
        partial[slot_start[v1]] = leaf;

        for (l, &v3) in tree.children(v1).iter().enumerate() {
            let prev = &partial[slot_start[v1] + l];
            let child_part = &partial[slot_start[v3] + tree.children(v3).len()];
            let child_best = &best[v3 * (k + 1)..(v3 + 1) * (k + 1)];
            let mut next = vec![0.0; width];
            for v2 in 0..n {
                for j in 1..=k {
                    next[v2 * (k + 1) + j] = best_split(prev, child_part, child_best, k + 1, j, v2).0;
                }
            }
            partial[slot_start[v1] + l + 1] = next;
        }

        let row = v1 * (k + 1);
        best[row] = tree
            .children(v1)
            .iter()
            .fold(1.0 - probs[v1], |acc, &c| acc * best[c * (k + 1)]);
        members.clear();
        members.extend(tree.subtree(v1));
        let full = &partial[slot_start[v1] + tree.children(v1).len()];
        for j in 1..=k {
            best[row + j] = members
                .iter()
                .map(|&v2| full[v2 * (k + 1) + j])
                .fold(f64::NEG_INFINITY, f64::max);
        }
    }

    let table = SuccessTable {
        k,
        r,
        n,
        slot_start,
        partial,
        best,
    };
    (table.subtree_value(tree.root(), k), table)
}

pub fn reconstruct_centers(table: &SuccessTable, tree: &RootedTree) -> Vec<VertexId> {
    table.reconstruct_centers(tree)
}

/// Optimal fixed center set for a radius, with its success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSolution {
    pub centers: Vec<VertexId>,
    pub radius: f64,
    pub success_probability: f64,
}

/// One evaluated radius during the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusProbe {
    pub radius: f64,
    pub probability: f64,
}

/// Smallest candidate radius whose optimal success probability reaches
/// `1 - rho`, with a witness center set.
pub fn solve_nonadaptive(
    instance: &KCenterInstance,
    k: usize,
    rho: f64,
) -> Result<CenterSolution, SolveError> {
    solve_nonadaptive_traced(instance, k, rho).map(|(solution, _)| solution)
}

/// [`solve_nonadaptive`] that also returns every radius probed by the
/// binary search, in probe order.
pub fn solve_nonadaptive_traced(
    instance: &KCenterInstance,
    k: usize,
    rho: f64,
) -> Result<(CenterSolution, Vec<RadiusProbe>), SolveError> {
    check_rho(rho)?;
    let n = instance.n();
    if k >= n {
        let solution = CenterSolution {
            centers: (0..n).collect(),
            radius: 0.0,
            success_probability: 1.0,
        };
        return Ok((solution, Vec::new()));
    }
    let target = 1.0 - rho - FEASIBILITY_SLACK;
    if k == 0 {
        let p: f64 = instance.probs().iter().map(|p| 1.0 - p).product();
        let probe = RadiusProbe {
            radius: 0.0,
            probability: p,
        };
        if p < target {
            return Err(SolveError::Infeasible);
        }
        let solution = CenterSolution {
            centers: Vec::new(),
            radius: 0.0,
            success_probability: p,
        };
        return Ok((solution, vec![probe]));
    }

    let tree = RootedTree::new(instance);
    let d = DistanceMatrix::from_tree(&tree);
    let radii = candidate_radii(&d);
    let mut trace = Vec::new();
    let index = radii
        .first_feasible(|r| {
            let (p, _) = max_success_probability(&tree, &d, instance.probs(), k, r);
            trace.push(RadiusProbe {
                radius: r,
                probability: p,
            });
            p >= target
        })
        .ok_or(SolveError::Infeasible)?;
    let radius = radii.as_slice()[index];
    let (p, table) = max_success_probability(&tree, &d, instance.probs(), k, radius);
    let solution = CenterSolution {
        centers: table.reconstruct_centers(&tree),
        radius,
        success_probability: p,
    };
    Ok((solution, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightedEdge;
    use crate::oracle::closed_form_success;

    fn path3(probs: [f64; 3]) -> KCenterInstance {
        KCenterInstance::new(
            probs.to_vec(),
            vec![WeightedEdge::new(0, 1, 1.0), WeightedEdge::new(1, 2, 1.0)],
            None,
        )
        .unwrap()
    }

    fn setup(inst: &KCenterInstance) -> (RootedTree, DistanceMatrix) {
        let t = RootedTree::new(inst);
        let d = DistanceMatrix::from_tree(&t);
        (t, d)
    }

    #[test]
    fn single_vertex_values() {
        let inst = KCenterInstance::new(vec![0.7], vec![], None).unwrap();
        let (t, d) = setup(&inst);
        let (p1, table) = max_success_probability(&t, &d, inst.probs(), 1, 0.0);
        assert_eq!(p1, 1.0);
        assert_eq!(table.reconstruct_centers(&t), vec![0]);
        let (p0, table) = max_success_probability(&t, &d, inst.probs(), 0, 0.0);
        assert!((p0 - 0.3).abs() < 1e-15);
        assert!(table.reconstruct_centers(&t).is_empty());
    }

    #[test]
    fn path_hub_is_optimal() {
        let inst = path3([1.0; 3]);
        let (t, d) = setup(&inst);
        let (p, table) = max_success_probability(&t, &d, inst.probs(), 1, 1.0);
        assert_eq!(p, 1.0);
        assert_eq!(table.reconstruct_centers(&t), vec![1]);
        let (p, _) = max_success_probability(&t, &d, inst.probs(), 1, 0.5);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn path_solve() {
        let sol = solve_nonadaptive(&path3([1.0; 3]), 1, 0.01).unwrap();
        assert_eq!(sol.radius, 1.0);
        assert_eq!(sol.centers, vec![1]);
        assert_eq!(sol.success_probability, 1.0);
    }

    #[test]
    fn vacuous_risk_gives_zero_radius() {
        let sol = solve_nonadaptive(&path3([0.9, 0.4, 0.8]), 1, 1.0).unwrap();
        assert_eq!(sol.radius, 0.0);
    }

    #[test]
    fn no_centers() {
        let inst = path3([0.5, 0.0, 0.5]);
        let sol = solve_nonadaptive(&inst, 0, 0.8).unwrap();
        assert!(sol.centers.is_empty());
        assert!((sol.success_probability - 0.25).abs() < 1e-15);
        assert_eq!(solve_nonadaptive(&inst, 0, 0.5), Err(SolveError::Infeasible));
    }

    #[test]
    fn many_centers_short_circuit() {
        let sol = solve_nonadaptive(&path3([0.3; 3]), 5, 0.1).unwrap();
        assert_eq!(sol.centers, vec![0, 1, 2]);
        assert_eq!(sol.radius, 0.0);
        assert_eq!(sol.success_probability, 1.0);
    }

    #[test]
    fn invalid_rho() {
        let inst = path3([0.3; 3]);
        assert_eq!(solve_nonadaptive(&inst, 1, 0.0), Err(SolveError::InvalidRisk(0.0)));
        assert_eq!(solve_nonadaptive(&inst, 1, 1.5), Err(SolveError::InvalidRisk(1.5)));
    }

    #[test]
    fn reconstruction_matches_closed_form() {
        // 0 - 1 - 2 - 3 - 4 with a branch 1 - 5
        let inst = KCenterInstance::new(
            vec![0.9, 0.1, 0.6, 0.3, 0.8, 0.5],
            vec![
                WeightedEdge::new(0, 1, 2.0),
                WeightedEdge::new(1, 2, 1.0),
                WeightedEdge::new(2, 3, 2.0),
                WeightedEdge::new(3, 4, 1.0),
                WeightedEdge::new(1, 5, 3.0),
            ],
            None,
        )
        .unwrap();
        let (t, d) = setup(&inst);
        for k in 0..=3 {
            for r in [0.0, 1.0, 2.0, 3.0, 4.0] {
                let (p, table) = max_success_probability(&t, &d, inst.probs(), k, r);
                let c = table.reconstruct_centers(&t);
                assert!(c.len() <= k);
                let check = closed_form_success(&d, &c, inst.probs(), r);
                assert!((check - p).abs() < 1e-12, "k={k} r={r}: {p} vs {check}");
            }
        }
    }
}
