//! Exact offline solvers for the small kernels recovered from a sample.
//!
//! All solvers relabel the input to dense indices, run on the dense form and map
//! certificates back. Outputs are deterministic for a given input graph.

mod blossom;
mod contraction;
mod cover;
mod hitting;
mod hypermatch;
mod weighted;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Edge, VertexId};

pub use blossom::max_matching;
pub use contraction::{solve_contraction_property, PropertySpec};
pub use cover::min_vertex_cover;
pub use hitting::min_hitting_set;
pub use hypermatch::max_hypergraph_matching;
pub use weighted::max_weight_matching;

pub(crate) use blossom::NONE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("solver needs pairwise edges, found an edge of arity {0}")]
    NotPairwise(usize),
    #[error("unsupported property '{0}'")]
    UnsupportedProperty(String),
}

/// A small weighted (hyper)graph. Edges are canonical and unique.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SmallGraph {
    edges: Vec<(Edge, f64)>,
}

impl SmallGraph {
    /// Builds a graph; a repeated edge keeps its first weight.
    pub fn new<I: IntoIterator<Item = (Edge, f64)>>(edges: I) -> Self {
        let mut map: BTreeMap<Edge, f64> = BTreeMap::new();
        for (e, w) in edges {
            map.entry(e).or_insert(w);
        }
        SmallGraph { edges: map.into_iter().collect() }
    }

    pub fn unweighted<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        Self::new(edges.into_iter().map(|e| (e, 1.0)))
    }

    /// Pairwise graph from `(u, v)` pairs; self-loops are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VertexId, VertexId)>>(pairs: I) -> Self {
        Self::unweighted(pairs.into_iter().filter_map(|(u, v)| Edge::pair(u, v).ok()))
    }

    pub fn edges(&self) -> &[(Edge, f64)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.edges.iter().flat_map(|(e, _)| e.vertices().iter().copied()).collect()
    }

    pub fn max_arity(&self) -> usize {
        self.edges.iter().map(|(e, _)| e.arity()).max().unwrap_or(0)
    }

    pub fn with_edge(&self, edge: Edge, w: f64) -> SmallGraph {
        SmallGraph::new(self.edges.iter().cloned().chain(std::iter::once((edge, w))))
    }

    pub(crate) fn check_pairwise(&self) -> Result<(), SolverError> {
        match self.edges.iter().find(|(e, _)| e.arity() != 2) {
            Some((e, _)) => Err(SolverError::NotPairwise(e.arity())),
            None => Ok(()),
        }
    }

    pub(crate) fn dense(&self) -> Dense {
        let labels: Vec<VertexId> = self.vertices().into_iter().collect();
        let index: BTreeMap<VertexId, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .map(|(e, w)| (e.vertices().iter().map(|v| index[v]).collect(), *w))
            .collect();
        Dense { labels, edges }
    }
}

/// Dense relabeling: vertex `i` is `labels[i]`; edges keep canonical order.
pub(crate) struct Dense {
    pub labels: Vec<VertexId>,
    pub edges: Vec<(Vec<usize>, f64)>,
}

impl Dense {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge(&self, i: usize) -> Edge {
        Edge::new(self.edges[i].0.iter().map(|&v| self.labels[v]).collect()).expect("relabeled edge stays simple")
    }

    /// Sorted neighbor lists of a pairwise graph.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (e, _) in &self.edges {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Edge ids incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n()];
        for (i, (e, _)) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Matching,
    VertexCover,
    HittingSet,
    Subgraph,
}

/// A solver answer with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub kind: SolutionKind,
    /// Cover / hitting-set vertices, sorted.
    pub vertices: Vec<VertexId>,
    /// Matching or subgraph edges, canonical order.
    pub edges: Vec<Edge>,
    pub size: usize,
    pub total_weight: f64,
}

impl Solution {
    pub fn from_edges(kind: SolutionKind, mut edges: Vec<(Edge, f64)>) -> Self {
        edges.sort_by(|a, b| a.0.cmp(&b.0));
        let total_weight = edges.iter().map(|(_, w)| w).sum();
        let size = edges.len();
        Solution { kind, vertices: Vec::new(), edges: edges.into_iter().map(|(e, _)| e).collect(), size, total_weight }
    }

    pub fn from_vertices(kind: SolutionKind, mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let size = vertices.len();
        Solution { kind, vertices, edges: Vec::new(), size, total_weight: size as f64 }
    }

    pub fn empty(kind: SolutionKind) -> Self {
        Solution { kind, vertices: Vec::new(), edges: Vec::new(), size: 0, total_weight: 0.0 }
    }

    /// True when the certificate edges are pairwise disjoint.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| e.vertices().iter().all(|&v| seen.insert(v)))
    }

    /// True when every edge of `edges` meets the certificate vertices.
    pub fn hits_all<'a, I: IntoIterator<Item = &'a Edge>>(&self, edges: I) -> bool {
        let set: BTreeSet<VertexId> = self.vertices.iter().copied().collect();
        edges.into_iter().all(|e| e.vertices().iter().any(|v| set.contains(v)))
    }

    /// True when the certificate is a matching made of edges of `graph`.
    pub fn is_matching_of(&self, graph: &SmallGraph) -> bool {
        let present: BTreeSet<&Edge> = graph.edges().iter().map(|(e, _)| e).collect();
        self.is_disjoint() && self.edges.iter().all(|e| present.contains(e))
    }
}

/// Result of a budgeted minimization.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Budgeted {
    Found(Solution),
    Exceeds(usize),
}

impl Budgeted {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Budgeted::Found(s) => Some(s),
            Budgeted::Exceeds(_) => None,
        }
    }

    pub fn into_solution(self) -> Option<Solution> {
        match self {
            Budgeted::Found(s) => Some(s),
            Budgeted::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolutionKind::Matching => "matching",
            SolutionKind::VertexCover => "vertex_cover",
            SolutionKind::HittingSet => "hitting_set",
            SolutionKind::Subgraph => "subgraph",
        };
        f.write_str(s)
    }
}

/// Greedy disjoint packing of the given edges (a lower bound for covers and
/// hitting sets).
pub(crate) fn greedy_packing(edges: &[&[usize]], n: usize) -> usize {
    let mut used = vec![false; n];
    let mut count = 0;
    for e in edges {
        if e.iter().all(|&v| !used[v]) {
            e.iter().for_each(|&v| used[v] = true);
            count += 1;
        }
    }
    count
}
