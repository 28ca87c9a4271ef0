//! In-memory problem instances and their validation.
//!
//! Every constructor validates; an instance that exists is well formed and
//! immutable, so it can be shared freely between solver runs.

use alloc::vec;
use alloc::vec::Vec;

/// Dense vertex (or element) index in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

impl WeightedEdge {
    pub fn new(u: VertexId, v: VertexId, w: f64) -> Self {
        WeightedEdge { u, v, w }
    }
}

/// One validation failure. Each violated invariant has its own variant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("instance has no vertices")]
    Empty,
    #[error("probability {value} at index {index} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("edge {index} has weight {weight}, expected a finite nonnegative number")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("edge {index} references vertex {vertex} but the instance has {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} duplicates an earlier edge between {u} and {v}")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index} closes a cycle, the edges do not form a tree")]
    Cyclic { index: usize },
    #[error("edges leave {components} connected components, expected a spanning tree")]
    Disconnected { components: usize },
    #[error("root {root} is out of range for {n} vertices")]
    RootOutOfRange { root: usize, n: usize },
    #[error("set {index} has cost {cost}, expected a finite positive number")]
    InvalidCost { index: usize, cost: f64 },
    #[error("set {set} references element {element} but the instance has {n} elements")]
    MemberOutOfRange { set: usize, element: usize, n: usize },
    #[error("invalid distribution parameter: {0}")]
    InvalidLaw(&'static str),
}

fn check_probs(probs: &[f64]) -> Result<(), InstanceError> {
    for (index, &value) in probs.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(InstanceError::ProbabilityOutOfRange { index, value });
        }
    }
    Ok(())
}

fn check_endpoints(index: usize, u: usize, v: usize, n: usize) -> Result<(), InstanceError> {
    for vertex in [u, v] {
        if vertex >= n {
            return Err(InstanceError::VertexOutOfRange { index, vertex, n });
        }
    }
    if u == v {
        return Err(InstanceError::SelfLoop { index, vertex: u });
    }
    Ok(())
}

/// Weighted tree with independent per-vertex presence probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct KCenterInstance {
    probs: Vec<f64>,
    edges: Vec<WeightedEdge>,
    root: VertexId,
}

impl KCenterInstance {
    /// Validates probabilities, weights and the spanning-tree property.
    /// `root` defaults to vertex 0.
    pub fn new(
        probs: Vec<f64>,
        edges: Vec<WeightedEdge>,
        root: Option<VertexId>,
    ) -> Result<Self, InstanceError> {
        let n = probs.len();
        if n == 0 {
            return Err(InstanceError::Empty);
        }
        check_probs(&probs)?;
        let root = root.unwrap_or(0);
        if root >= n {
            return Err(InstanceError::RootOutOfRange { root, n });
        }
        let mut dsu = DisjointSets::new(n);
        for (index, e) in edges.iter().enumerate() {
            check_endpoints(index, e.u, e.v, n)?;
            if !(e.w.is_finite() && e.w >= 0.0) {
                return Err(InstanceError::InvalidWeight { index, weight: e.w });
            }
            if !dsu.union(e.u, e.v) {
                return Err(InstanceError::Cyclic { index });
            }
        }
        if dsu.components > 1 {
            return Err(InstanceError::Disconnected {
                components: dsu.components,
            });
        }
        Ok(KCenterInstance { probs, edges, root })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Same tree and probabilities, rooted elsewhere.
    pub fn with_root(&self, root: VertexId) -> Result<Self, InstanceError> {
        if root >= self.n() {
            return Err(InstanceError::RootOutOfRange { root, n: self.n() });
        }
        Ok(KCenterInstance {
            root,
            ..self.clone()
        })
    }
}

/// A candidate set with its cost and member elements (sorted, unique).
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSet {
    pub cost: f64,
    pub members: Vec<usize>,
}

/// Set system over `n` independently present elements.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverInstance {
    element_probs: Vec<f64>,
    sets: Vec<CoverSet>,
}

impl SetCoverInstance {
    pub fn new(element_probs: Vec<f64>, sets: Vec<CoverSet>) -> Result<Self, InstanceError> {
        check_probs(&element_probs)?;
        let n = element_probs.len();
        let mut sets = sets;
        for (index, set) in sets.iter_mut().enumerate() {
            if !(set.cost.is_finite() && set.cost > 0.0) {
                return Err(InstanceError::InvalidCost {
                    index,
                    cost: set.cost,
                });
            }
            if let Some(&element) = set.members.iter().find(|&&e| e >= n) {
                return Err(InstanceError::MemberOutOfRange {
                    set: index,
                    element,
                    n,
                });
            }
            set.members.sort_unstable();
            set.members.dedup();
        }
        Ok(SetCoverInstance {
            element_probs,
            sets,
        })
    }

    pub fn n(&self) -> usize {
        self.element_probs.len()
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn element_probs(&self) -> &[f64] {
        &self.element_probs
    }

    pub fn sets(&self) -> &[CoverSet] {
        &self.sets
    }

    /// Elements that belong to no set.
    pub fn uncoverable_elements(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n()];
        for set in &self.sets {
            for &e in &set.members {
                covered[e] = true;
            }
        }
        (0..self.n()).filter(|&e| !covered[e]).collect()
    }

    /// Elements left uncovered by the selected sets.
    pub fn uncovered_by(&self, chosen: &[usize]) -> Vec<usize> {
        let mut covered = vec![false; self.n()];
        for &i in chosen {
            for &e in &self.sets[i].members {
                covered[e] = true;
            }
        }
        (0..self.n()).filter(|&e| !covered[e]).collect()
    }

    pub fn cost_of(&self, chosen: &[usize]) -> f64 {
        chosen.iter().map(|&i| self.sets[i].cost).fold(0.0, |acc, c| acc + c)
    }
}

/// Simple undirected graph with per-vertex probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    probs: Vec<f64>,
    edges: Vec<(VertexId, VertexId)>,
}

impl GraphInstance {
    pub fn new(probs: Vec<f64>, edges: Vec<(VertexId, VertexId)>) -> Result<Self, InstanceError> {
        let n = probs.len();
        if n == 0 {
            return Err(InstanceError::Empty);
        }
        check_probs(&probs)?;
        let mut seen = alloc::collections::BTreeSet::new();
        for (index, &(u, v)) in edges.iter().enumerate() {
            check_endpoints(index, u, v, n)?;
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(InstanceError::DuplicateEdge { index, u, v });
            }
        }
        Ok(GraphInstance { probs, edges })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        let mut degree = vec![0usize; self.n()];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        (0..self.n()).filter(|&v| degree[v] == 0).collect()
    }

    /// Adjacency as bitmasks; only meaningful for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n()];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemInstance {
    Tree(KCenterInstance),
    Graph(GraphInstance),
    SetCover(SetCoverInstance),
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Vec<WeightedEdge> {
        vec![WeightedEdge::new(0, 1, 1.0), WeightedEdge::new(1, 2, 1.0)]
    }

    #[test]
    fn single_vertex_is_valid() {
        let inst = KCenterInstance::new(vec![0.5], vec![], None).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.root(), 0);
    }

    #[test]
    fn path_is_valid() {
        let inst = KCenterInstance::new(vec![1.0; 3], path3(), None).unwrap();
        assert_eq!(inst.edges().len(), 2);
    }

    #[test]
    fn triangle_is_cyclic() {
        let mut edges = path3();
        edges.push(WeightedEdge::new(2, 0, 1.0));
        assert_eq!(
            KCenterInstance::new(vec![1.0; 3], edges, None),
            Err(InstanceError::Cyclic { index: 2 })
        );
    }

    #[test]
    fn each_violation_has_its_own_error() {
        assert_eq!(KCenterInstance::new(vec![], vec![], None), Err(InstanceError::Empty));
        assert!(matches!(
            KCenterInstance::new(vec![1.5, 0.0], vec![WeightedEdge::new(0, 1, 1.0)], None),
            Err(InstanceError::ProbabilityOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            KCenterInstance::new(vec![0.5, 0.5], vec![WeightedEdge::new(0, 1, -1.0)], None),
            Err(InstanceError::InvalidWeight { index: 0, .. })
        ));
        assert!(matches!(
            KCenterInstance::new(vec![0.5, 0.5], vec![WeightedEdge::new(0, 7, 1.0)], None),
            Err(InstanceError::VertexOutOfRange { vertex: 7, .. })
        ));
        assert!(matches!(
            KCenterInstance::new(vec![0.5, 0.5], vec![WeightedEdge::new(1, 1, 1.0)], None),
            Err(InstanceError::SelfLoop { .. })
        ));
        assert_eq!(
            KCenterInstance::new(vec![0.5; 3], vec![WeightedEdge::new(0, 1, 1.0)], None),
            Err(InstanceError::Disconnected { components: 2 })
        );
        assert_eq!(
            KCenterInstance::new(vec![0.5], vec![], Some(3)),
            Err(InstanceError::RootOutOfRange { root: 3, n: 1 })
        );
        assert!(matches!(
            KCenterInstance::new(vec![0.5, f64::NAN], vec![WeightedEdge::new(0, 1, 1.0)], None),
            Err(InstanceError::ProbabilityOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn set_cover_validation() {
        let ok = SetCoverInstance::new(
            vec![0.1, 0.2, 0.0],
            vec![CoverSet {
                cost: 1.0,
                members: vec![1, 0, 1],
            }],
        )
        .unwrap();
        assert_eq!(ok.sets()[0].members, vec![0, 1]);
        assert_eq!(ok.uncoverable_elements(), vec![2]);
        assert_eq!(ok.uncovered_by(&[]), vec![0, 1, 2]);
        assert!(matches!(
            SetCoverInstance::new(vec![0.1], vec![CoverSet { cost: 0.0, members: vec![0] }]),
            Err(InstanceError::InvalidCost { index: 0, .. })
        ));
        assert!(matches!(
            SetCoverInstance::new(vec![0.1], vec![CoverSet { cost: 1.0, members: vec![4] }]),
            Err(InstanceError::MemberOutOfRange { set: 0, element: 4, n: 1 })
        ));
    }

    #[test]
    fn graph_validation() {
        let g = GraphInstance::new(vec![0.5; 4], vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.isolated_vertices(), vec![3]);
        assert!(matches!(
            GraphInstance::new(vec![0.5; 3], vec![(0, 1), (1, 0)]),
            Err(InstanceError::DuplicateEdge { index: 1, .. })
        ));
        assert!(matches!(
            GraphInstance::new(vec![0.5; 3], vec![(2, 2)]),
            Err(InstanceError::SelfLoop { .. })
        ));
    }
}
