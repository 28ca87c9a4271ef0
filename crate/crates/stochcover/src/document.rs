//! JSON instance documents.
//!
//! ```json
//! {"type": "tree",
//!  "vertices": [{"id": 0, "p": 0.5}, {"id": 1, "p": 0.25}],
//!  "edges": [{"u": 0, "v": 1, "w": 2.0}],
//!  "root": 0}
//! ```
//!
//! Graph documents use the same shape with `"type": "graph"` and may omit
//! `w` (it defaults to 1 and is otherwise ignored). Set cover documents carry
//! `elements: [{id, p}]` and `sets: [{id, cost, members}]`. Ids must be
//! exactly `0..n` in some order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stochcover_core::{
    CoverSet, GraphInstance, InstanceError, KCenterInstance, ProblemInstance, SetCoverInstance,
    WeightedEdge,
};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{what} ids must be exactly 0..{n}, found {found}")]
    Ids {
        what: &'static str,
        n: usize,
        found: u64,
    },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: u64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: u64,
    pub v: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetEntry {
    pub id: u64,
    pub cost: f64,
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Document {
    Tree {
        vertices: Vec<Point>,
        edges: Vec<Edge>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        root: Option<u64>,
    },
    Graph {
        vertices: Vec<Point>,
        edges: Vec<Edge>,
    },
    Setcover {
        elements: Vec<Point>,
        sets: Vec<SetEntry>,
    },
}

/// Values ordered by id, after checking the ids are a permutation of `0..n`.
fn dense<T: Clone>(what: &'static str, items: &[T], id: impl Fn(&T) -> u64) -> Result<Vec<T>, DocumentError> {
    let n = items.len();
    let mut slots: Vec<Option<T>> = vec![None; n];
    for item in items {
        let found = id(item);
        let slot = usize::try_from(found)
            .ok()
            .and_then(|i| slots.get_mut(i))
            .filter(|s| s.is_none())
            .ok_or(DocumentError::Ids { what, n, found })?;
        *slot = Some(item.clone());
    }
    Ok(slots.into_iter().map(|s| s.expect("every slot filled")).collect())
}

fn index(x: u64) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX)
}

impl Document {
    pub fn into_instance(self) -> Result<ProblemInstance, DocumentError> {
        Ok(match self {
            Document::Tree { vertices, edges, root } => {
                let probs = dense("vertex", &vertices, |v| v.id)?.iter().map(|v| v.p).collect();
                let edges = edges
                    .iter()
                    .map(|e| WeightedEdge::new(index(e.u), index(e.v), e.w.unwrap_or(f64::NAN)))
                    .collect();
                ProblemInstance::Tree(KCenterInstance::new(probs, edges, root.map(index))?)
            }
            Document::Graph { vertices, edges } => {
                let probs = dense("vertex", &vertices, |v| v.id)?.iter().map(|v| v.p).collect();
                let edges = edges.iter().map(|e| (index(e.u), index(e.v))).collect();
                ProblemInstance::Graph(GraphInstance::new(probs, edges)?)
            }
            Document::Setcover { elements, sets } => {
                let probs = dense("element", &elements, |e| e.id)?.iter().map(|e| e.p).collect();
                let sets = dense("set", &sets, |s| s.id)?
                    .into_iter()
                    .map(|s| CoverSet {
                        cost: s.cost,
                        members: s.members.into_iter().map(index).collect(),
                    })
                    .collect();
                ProblemInstance::SetCover(SetCoverInstance::new(probs, sets)?)
            }
        })
    }

    pub fn from_instance(instance: &ProblemInstance) -> Self {
        let points = |probs: &[f64]| -> Vec<Point> {
            probs.iter().enumerate().map(|(i, &p)| Point { id: i as u64, p }).collect()
        };
        match instance {
            ProblemInstance::Tree(t) => Document::Tree {
                vertices: points(t.probs()),
                edges: t
                    .edges()
                    .iter()
                    .map(|e| Edge { u: e.u as u64, v: e.v as u64, w: Some(e.w) })
                    .collect(),
                root: Some(t.root() as u64),
            },
            ProblemInstance::Graph(g) => Document::Graph {
                vertices: points(g.probs()),
                edges: g
                    .edges()
                    .iter()
                    .map(|&(u, v)| Edge { u: u as u64, v: v as u64, w: None })
                    .collect(),
            },
            ProblemInstance::SetCover(s) => Document::Setcover {
                elements: points(s.element_probs()),
                sets: s
                    .sets()
                    .iter()
                    .enumerate()
                    .map(|(i, set)| SetEntry {
                        id: i as u64,
                        cost: set.cost,
                        members: set.members.iter().map(|&e| e as u64).collect(),
                    })
                    .collect(),
            },
        }
    }
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, DocumentError> {
    serde_json::from_str::<Document>(text)?.into_instance()
}

pub fn serialize_instance(instance: &ProblemInstance) -> String {
    let mut text = serde_json::to_string_pretty(&Document::from_instance(instance))
        .expect("documents always serialize");
    text.push('\n');
    text
}

pub fn read_instance(path: &Path) -> Result<ProblemInstance, DocumentError> {
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}
