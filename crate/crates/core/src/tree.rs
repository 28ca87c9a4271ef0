//! Rooted tree structure, all-pairs path distances and the candidate radii.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{KCenterInstance, VertexId};

/// Child-ordered rooted tree. Children are sorted by ascending id so every
/// traversal, and therefore every DP enumeration, is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    /// Weight of the edge to the parent (0 for the root).
    parent_weight: Vec<f64>,
    postorder: Vec<VertexId>,
}

impl RootedTree {
    pub fn new(instance: &KCenterInstance) -> Self {
        Self::rooted_at(instance, instance.root())
    }

    /// Panics if `root` is out of range.
    pub fn rooted_at(instance: &KCenterInstance, root: VertexId) -> Self {
        let n = instance.n();
        let mut adj: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); n];
        for e in instance.edges() {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }

        let mut parent = vec![None; n];
        let mut parent_weight = vec![0.0; n];
        let mut children = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(u) = stack.pop() {
            preorder.push(u);
            for &(v, w) in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(u);
                    parent_weight[v] = w;
                    children[u].push(v);
                    stack.push(v);
                }
            }
        }

        // children lists are already ascending; build a postorder that visits
        // children left to right.
        let mut postorder = Vec::with_capacity(n);
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < children[u].len() {
                let c = children[u][*next];
                *next += 1;
                stack.push((c, 0));
            } else {
                postorder.push(u);
                stack.pop();
            }
        }
        debug_assert_eq!(postorder.len(), preorder.len());

        RootedTree {
            root,
            parent,
            children,
            parent_weight,
            postorder,
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Weight of the edge between `v` and its parent.
    pub fn parent_weight(&self, v: VertexId) -> f64 {
        self.parent_weight[v]
    }

    /// Every child precedes its parent; the root comes last.
    pub fn postorder(&self) -> &[VertexId] {
        &self.postorder
    }

    /// Vertices of the subtree under `v`, including `v`.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    fn neighbours(&self, u: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let up = self.parent[u].map(|p| (p, self.parent_weight[u]));
        self.children[u]
            .iter()
            .map(move |&c| (c, self.parent_weight[c]))
            .chain(up)
    }
}

pub fn build_rooted_tree(instance: &KCenterInstance) -> RootedTree {
    RootedTree::new(instance)
}

/// Symmetric `n x n` matrix of tree path lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Path lengths by a walk from every source. Entry `(u, v)` with `u < v`
    /// is summed along the path starting at `u` and mirrored, so the matrix
    /// is exactly symmetric.
    pub fn from_tree(tree: &RootedTree) -> Self {
        let n = tree.n();
        let mut data = vec![0.0; n * n];
        let mut dist = vec![0.0; n];
        let mut stack = Vec::new();
        for s in 0..n {
            dist[s] = 0.0;
            stack.push((s, usize::MAX));
            while let Some((u, from)) = stack.pop() {
                for (v, w) in tree.neighbours(u) {
                    if v != from {
                        dist[v] = dist[u] + w;
                        stack.push((v, u));
                    }
                }
            }
            for v in s + 1..n {
                data[s * n + v] = dist[v];
                data[v * n + s] = dist[v];
            }
        }
        DistanceMatrix { n, data }
    }

    /// Wraps a precomputed row-major matrix. Panics if the length is not a
    /// square.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "distance data must be n * n");
        DistanceMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: VertexId) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Distance from `v` to the nearest vertex of `centers` (infinite when
    /// `centers` is empty).
    pub fn to_set(&self, v: VertexId, centers: &[VertexId]) -> f64 {
        centers
            .iter()
            .map(|&c| self.get(v, c))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn all_pairs_distances(tree: &RootedTree) -> DistanceMatrix {
    DistanceMatrix::from_tree(tree)
}

/// Sorted, deduplicated `{0} ∪ {d(u, v) : u < v}`. Any optimal radius is one
/// of these values.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusCandidates(Vec<f64>);

impl RadiusCandidates {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.0.last().expect("candidate list always contains 0")
    }

    /// Index of the first candidate for which `feasible` holds, assuming
    /// feasibility is monotone in the radius.
    pub fn first_feasible(
        &self,
        mut feasible: impl FnMut(f64) -> bool,
    ) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, self.0.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if feasible(self.0[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        (lo < self.0.len()).then_some(lo)
    }
}

pub fn candidate_radii(d: &DistanceMatrix) -> RadiusCandidates {
    let n = d.n();
    let mut values = Vec::with_capacity(1 + n * n.saturating_sub(1) / 2);
    values.push(0.0);
    for u in 0..n {
        values.extend_from_slice(&d.row(u)[u + 1..]);
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    RadiusCandidates(values)
}
