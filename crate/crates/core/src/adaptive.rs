//! Adaptive stochastic k-center on tree metrics.
//!
//! In the adaptive setting the centers are chosen after the random vertex
//! set `S` is revealed, so the quantity of interest is the failure
//! probability `P(min-cover(S, r) > k)`. It is computed exactly by folding
//! a distribution over covering *profiles* bottom-up through the tree.
//!
//! A profile `(j, d, d')` of a random subset of a part rooted at `v` records
//!
//! * `j`: the minimum number of centers covering the subset within `r`,
//! * `d`: the distance from `v` to the closest center of such a cover,
//! * `d'`: the farthest distance from `v` at which a center *outside* the
//!   part saves one of the `j` centers, or "no helper" when none does.
//!
//! Every subset falls in exactly one profile, so the masses of a part sum to
//! one and the failure probability is the root mass with `j > k`.
//!
//! Internally each profile keeps a witness vertex: the closest center for
//! covered parts, or the deepest vertex still waiting for a center from
//! outside (in which case the cover is closed by a center at `v`, so
//! `d = 0`). Distance tests then read the distance matrix directly, which
//! keeps the fold consistent with any oracle working from the same matrix.
//!
//! Two parts are combined with the minimum cover of their union:
//!
//! * both covered: counts add, the closer center survives;
//! * one open, one covered: if the covered side's center reaches the open
//!   side's deepest vertex the open side's closing center is saved;
//! * both open: one closing center serves both, the deeper vertex survives.
//!
//! An open part whose deepest vertex can no longer be reached from outside
//! is closed on the spot with a real center at its root.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::instance::{KCenterInstance, VertexId};
use crate::tree::{candidate_radii, DistanceMatrix, RootedTree};
use crate::{check_rho, SolveError, FEASIBILITY_SLACK};

/// Outside help available to a part (`d'`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Helper {
    /// No center outside the part can save one of its centers (`d' = -d`).
    None,
    /// A center outside at distance at most this value from the root saves
    /// one center.
    Reach(f64),
}

/// Covering profile `(j, d, d')` of a random subset of a part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub j: usize,
    pub d: f64,
    pub dprime: Helper,
}

impl Profile {
    fn total_cmp(&self, other: &Self) -> Ordering {
        let key = |h: &Helper| match *h {
            Helper::None => (0, 0.0),
            Helper::Reach(x) => (1, x),
        };
        let (a, b) = (key(&self.dprime), key(&other.dprime));
        self.j
            .cmp(&other.j)
            .then(self.d.total_cmp(&other.d))
            .then(a.0.cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Cover {
    Empty,
    /// Everything covered; the witness is the closest center to the root.
    Covered(VertexId),
    /// The witness is the deepest vertex still waiting for a center.
    Open(VertexId),
    /// Absorbing bucket for every `j` above the cap.
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    j: usize,
    cover: Cover,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    state: State,
    profile: Profile,
    mass: f64,
}

/// Sparse probability mass over the profiles of one part `T_{e(v, l)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDistribution {
    root: VertexId,
    /// Sorted vertex set of the part.
    members: Vec<VertexId>,
    /// Sorted by state; zero masses are never stored.
    entries: Vec<Entry>,
}

impl ProfileDistribution {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.mass).fold(0.0, |acc, m| acc + m)
    }

    /// Mass of all profiles with `j > k`.
    pub fn mass_above(&self, k: usize) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.state.j > k)
            .map(|e| e.mass)
            .fold(0.0, |acc, m| acc + m)
    }

    /// Profiles with their masses, equal profiles merged, in ascending
    /// `(j, d, d')` order.
    pub fn profiles(&self) -> Vec<(Profile, f64)> {
        let mut out: Vec<(Profile, f64)> =
            self.entries.iter().map(|e| (e.profile, e.mass)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(Profile, f64)> = Vec::with_capacity(out.len());
        for (p, m) in out {
            match merged.last_mut() {
                Some(last) if last.0.total_cmp(&p).is_eq() => last.1 += m,
                _ => merged.push((p, m)),
            }
        }
        merged
    }

    /// Mass on profiles with `j > 0` that still carry a helper. Zero at the
    /// root of the whole tree, where nothing is outside.
    pub fn helper_mass(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.state.j > 0 && matches!(e.profile.dprime, Helper::Reach(_)))
            .map(|e| e.mass)
            .fold(0.0, |acc, m| acc + m)
    }
}

/// Fold context for one radius: the metric, the probabilities and an
/// optional cap on `j`.
#[derive(Debug, Clone)]
pub struct ProfileDp<'a> {
    d: &'a DistanceMatrix,
    probs: &'a [f64],
    r: f64,
    cap: Option<usize>,
}

impl<'a> ProfileDp<'a> {
    pub fn new(d: &'a DistanceMatrix, probs: &'a [f64], r: f64) -> Self {
        ProfileDp {
            d,
            probs,
            r,
            cap: None,
        }
    }

    /// Collapse every profile with `j > k` into one absorbing bucket. The
    /// minimum cover never shrinks when parts are joined, so the failure
    /// mass for this `k` is unchanged. Off by default.
    pub fn with_overflow_cap(mut self, k: usize) -> Self {
        self.cap = Some(k);
        self
    }

    fn capped(&self, state: State) -> State {
        match self.cap {
            Some(k) if state.j > k => State {
                j: k + 1,
                cover: Cover::Overflow,
            },
            _ => state,
        }
    }

    /// Farthest vertex outside `members` (sorted) that covers `u`, measured
    /// from `root`.
    fn helper_reach(&self, root: VertexId, members: &[VertexId], u: VertexId) -> Option<f64> {
        let mut inside = members.iter().peekable();
        let mut reach: Option<f64> = None;
        for x in 0..self.d.n() {
            if inside.peek() == Some(&&x) {
                inside.next();
                continue;
            }
            if self.d.get(x, u) <= self.r {
                let dist = self.d.get(root, x);
                reach = Some(reach.map_or(dist, |h| h.max(dist)));
            }
        }
        reach
    }

    /// Turns raw states into entries: open states nobody outside can reach
    /// are closed at the root, and every state gets its profile.
    fn finish(
        &self,
        root: VertexId,
        members: Vec<VertexId>,
        raw: impl IntoIterator<Item = (State, f64)>,
    ) -> ProfileDistribution {
        let n = self.d.n();
        let mut reach_cache: Vec<Option<Option<f64>>> = vec![None; n];
        let mut entries: Vec<Entry> = Vec::new();
        for (state, mass) in raw {
            if mass == 0.0 {
                continue;
            }
            let (state, profile) = match state.cover {
                Cover::Empty => (
                    state,
                    Profile {
                        j: 0,
                        d: 0.0,
                        dprime: Helper::Reach(0.0),
                    },
                ),
                Cover::Covered(c) => (
                    state,
                    Profile {
                        j: state.j,
                        d: self.d.get(root, c),
                        dprime: Helper::None,
                    },
                ),
                Cover::Open(u) => {
                    let reach = *reach_cache[u]
                        .get_or_insert_with(|| self.helper_reach(root, &members, u));
                    match reach {
                        Some(h) => (
                            state,
                            Profile {
                                j: state.j,
                                d: 0.0,
                                dprime: Helper::Reach(h),
                            },
                        ),
                        None => (
                            State {
                                j: state.j,
                                cover: Cover::Covered(root),
                            },
                            Profile {
                                j: state.j,
                                d: 0.0,
                                dprime: Helper::None,
                            },
                        ),
                    }
                }
                Cover::Overflow => (
                    state,
                    Profile {
                        j: state.j,
                        d: 0.0,
                        dprime: Helper::None,
                    },
                ),
            };
            entries.push(Entry {
                state,
                profile,
                mass,
            });
        }
        entries.sort_by_key(|a| a.state);
        let mut merged: Vec<Entry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.state == e.state => last.mass += e.mass,
                _ => merged.push(e),
            }
        }
        ProfileDistribution {
            root,
            members,
            entries: merged,
        }
    }

    /// Distribution of the single-vertex part `{v}`: present with
    /// probability `p_v` (one center, helped by any other vertex within
    /// `r`), absent otherwise.
    pub fn leaf(&self, v: VertexId) -> ProfileDistribution {
        let p = self.probs[v];
        let present = self.capped(State {
            j: 1,
            cover: Cover::Open(v),
        });
        let absent = State {
            j: 0,
            cover: Cover::Empty,
        };
        self.finish(v, vec![v], [(present, p), (absent, 1.0 - p)])
    }

    fn dense_index(&self, state: State) -> usize {
        let n = self.d.n();
        let width = 2 * n + 2;
        let slot = match state.cover {
            Cover::Empty => 0,
            Cover::Covered(c) => 1 + c,
            Cover::Open(u) => 1 + n + u,
            Cover::Overflow => 1 + 2 * n,
        };
        state.j * width + slot
    }

    fn state_at(&self, index: usize) -> State {
        let n = self.d.n();
        let width = 2 * n + 2;
        let (j, slot) = (index / width, index % width);
        let cover = match slot {
            0 => Cover::Empty,
            s if s <= n => Cover::Covered(s - 1),
            s if s <= 2 * n => Cover::Open(s - 1 - n),
            _ => Cover::Overflow,
        };
        State { j, cover }
    }

    /// Minimum cover of the union of a part rooted at `v1` and a part
    /// rooted at `v1`'s child `v3`, the latter already lifted to `v1`.
    fn combine(&self, v1: VertexId, a: State, b: State) -> State {
        let d = self.d;
        let r = self.r;
        let closer = |x: VertexId, y: VertexId| match d.get(v1, x).total_cmp(&d.get(v1, y)) {
            Ordering::Less => x,
            Ordering::Greater => y,
            Ordering::Equal => x.min(y),
        };
        let deeper = |x: VertexId, y: VertexId| match d.get(v1, x).total_cmp(&d.get(v1, y)) {
            Ordering::Greater => x,
            Ordering::Less => y,
            Ordering::Equal => x.min(y),
        };
        let (j, cover) = match (a.cover, b.cover) {
            (Cover::Overflow, _) | (_, Cover::Overflow) => (a.j + b.j, Cover::Overflow),
            (Cover::Empty, _) => (b.j, b.cover),
            (_, Cover::Empty) => (a.j, a.cover),
            (Cover::Covered(c1), Cover::Covered(c2)) => (a.j + b.j, Cover::Covered(closer(c1, c2))),
            (Cover::Covered(c), Cover::Open(u)) | (Cover::Open(u), Cover::Covered(c)) => {
                if d.get(c, u) <= r {
                    (a.j + b.j - 1, Cover::Covered(c))
                } else {
                    (a.j + b.j, Cover::Open(u))
                }
            }
            (Cover::Open(u1), Cover::Open(u2)) => (a.j + b.j - 1, Cover::Open(deeper(u1, u2))),
        };
        self.capped(State { j, cover })
    }

    /// Joins the part `left` (rooted at `v1`) with the complete subtree
    /// `child` hanging from `v1` by a tree edge. The child's root must be
    /// adjacent to `v1`.
    pub fn merge(&self, left: &ProfileDistribution, child: &ProfileDistribution) -> ProfileDistribution {
        let v1 = left.root;
        let v3 = child.root;
        let d = self.d;

        let lifted: Vec<(State, f64)> = child
            .entries
            .iter()
            .map(|e| {
                let state = match e.state.cover {
                    Cover::Open(u) if d.get(v1, u) > self.r => State {
                        j: e.state.j,
                        cover: Cover::Covered(v3),
                    },
                    _ => e.state,
                };
                (state, e.mass)
            })
            .collect();

        let max_j = |dist: &ProfileDistribution| dist.entries.iter().map(|e| e.state.j).max().unwrap_or(0);
        let len = self.dense_index(State {
            j: max_j(left) + max_j(child) + 1,
            cover: Cover::Empty,
        });
        let mut dense = vec![0.0f64; len];
        let mut touched = Vec::new();
        for e1 in &left.entries {
            for &(s2, m2) in &lifted {
                let index = self.dense_index(self.combine(v1, e1.state, s2));
                if dense[index] == 0.0 {
                    touched.push(index);
                }
                dense[index] += e1.mass * m2;
            }
        }
        touched.sort_unstable();
        touched.dedup();

        let mut members = Vec::with_capacity(left.members.len() + child.members.len());
        members.extend_from_slice(&left.members);
        members.extend_from_slice(&child.members);
        members.sort_unstable();

        let raw: Vec<(State, f64)> = touched
            .into_iter()
            .map(|i| (self.state_at(i), dense[i]))
            .collect();
        self.finish(v1, members, raw)
    }

    /// Folds the whole tree and reports the root distribution together with
    /// the extreme total masses seen at every intermediate part.
    pub fn fold(&self, tree: &RootedTree) -> FoldOutcome {
        let mut done: Vec<Option<ProfileDistribution>> = vec![None; tree.n()];
        let mut min_mass = f64::INFINITY;
        let mut max_mass = f64::NEG_INFINITY;
        let mut observe = |dist: &ProfileDistribution| {
            let m = dist.total_mass();
            min_mass = min_mass.min(m);
            max_mass = max_mass.max(m);
        };
        for &v in tree.postorder() {
            let mut acc = self.leaf(v);
            observe(&acc);
            for &c in tree.children(v) {
                let child = done[c].take().expect("children precede parents in postorder");
                acc = self.merge(&acc, &child);
                observe(&acc);
            }
            done[v] = Some(acc);
        }
        FoldOutcome {
            root: done[tree.root()].take().expect("root folded last"),
            min_mass,
            max_mass,
        }
    }
}

/// Result of a full fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub root: ProfileDistribution,
    /// Smallest total profile mass over every part built during the fold.
    pub min_mass: f64,
    /// Largest total profile mass over every part built during the fold.
    pub max_mass: f64,
}

/// Profile distribution of `{v}` alone.
pub fn leaf_distribution(v: VertexId, p_v: f64, d: &DistanceMatrix, r: f64) -> ProfileDistribution {
    let mut probs = vec![0.0; d.n()];
    probs[v] = p_v;
    ProfileDp::new(d, &probs, r).leaf(v)
}

/// Joins a part with a child subtree; see [`ProfileDp::merge`].
pub fn merge_distributions(
    left: &ProfileDistribution,
    child: &ProfileDistribution,
    d: &DistanceMatrix,
    r: f64,
) -> ProfileDistribution {
    ProfileDp::new(d, &[], r).merge(left, child)
}

/// `P(min-cover(S, r) > k)` for the random vertex set `S`.
pub fn failure_probability(
    tree: &RootedTree,
    d: &DistanceMatrix,
    probs: &[f64],
    k: usize,
    r: f64,
) -> f64 {
    ProfileDp::new(d, probs, r).fold(tree).root.mass_above(k)
}

/// Value-at-risk radius for the adaptive problem.
#[derive(Debug, Clone, PartialEq)]
pub struct VarResult {
    pub radius: f64,
    pub failure_probability: f64,
    pub k: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureProbe {
    pub radius: f64,
    pub failure: f64,
}

/// Smallest candidate radius whose adaptive failure probability is at most
/// `rho`.
pub fn solve_adaptive_var(
    instance: &KCenterInstance,
    k: usize,
    rho: f64,
) -> Result<VarResult, SolveError> {
    solve_adaptive_var_traced(instance, k, rho).map(|(res, _)| res)
}

pub fn solve_adaptive_var_traced(
    instance: &KCenterInstance,
    k: usize,
    rho: f64,
) -> Result<(VarResult, Vec<FailureProbe>), SolveError> {
    check_rho(rho)?;
    let limit = rho + FEASIBILITY_SLACK;
    let result = |radius, failure_probability| VarResult {
        radius,
        failure_probability,
        k,
        rho,
    };
    if k >= instance.n() {
        return Ok((result(0.0, 0.0), Vec::new()));
    }
    if k == 0 {
        // any present vertex needs a center, whatever the radius
        let failure = 1.0 - instance.probs().iter().map(|p| 1.0 - p).product::<f64>();
        let probe = FailureProbe {
            radius: 0.0,
            failure,
        };
        return if failure <= limit {
            Ok((result(0.0, failure), vec![probe]))
        } else {
            Err(SolveError::Infeasible)
        };
    }

    let tree = RootedTree::new(instance);
    let d = DistanceMatrix::from_tree(&tree);
    let radii = candidate_radii(&d);
    let mut trace = Vec::new();
    let index = radii
        .first_feasible(|r| {
            let failure = failure_probability(&tree, &d, instance.probs(), k, r);
            trace.push(FailureProbe { radius: r, failure });
            failure <= limit
        })
        .ok_or(SolveError::Infeasible)?;
    let radius = radii.as_slice()[index];
    let failure = trace
        .iter()
        .find(|p| p.radius == radius)
        .map(|p| p.failure)
        .expect("the selected radius was probed");
    Ok((result(radius, failure), trace))
}
