//! Ground truth: materialized stream graphs and exhaustive optima.
//!
//! The enumerators in [`exhaustive`] share no code with [`crate::solvers`], so the
//! two can check each other. [`oracle_solve`] enumerates when the instance is
//! within budget and falls back to the exact solvers otherwise.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solvers::{
    max_hypergraph_matching, max_matching, max_weight_matching, min_hitting_set, min_vertex_cover,
    solve_contraction_property, Budgeted, PropertySpec, SmallGraph, Solution, SolverError,
};
use crate::types::{Delta, Edge, EdgeError, EdgeUpdate, VertexId, Weight};

/// Largest search space the enumerators will walk.
pub const ENUMERATION_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("update {index}: {reason}")]
    Stream { index: usize, reason: String },
    #[error("update {index}: {source}")]
    Edge { index: usize, source: EdgeError },
    #[error("instance needs {needed} enumeration steps, budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The graph a stream defines once every update has been applied.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MaterializedGraph {
    pub n: u64,
    edges: BTreeMap<Edge, Weight>,
    degree: BTreeMap<VertexId, usize>,
}

impl MaterializedGraph {
    pub fn new(n: u64) -> Self {
        MaterializedGraph { n, ..Default::default() }
    }

    /// Applies one update. Inserting a live edge, deleting an absent one, or
    /// deleting with a weight other than the live one is an error.
    pub fn apply(&mut self, index: usize, update: &EdgeUpdate) -> Result<(), OracleError> {
        update.edge.check_bound(self.n).map_err(|source| OracleError::Edge { index, source })?;
        let fail = |reason: String| Err(OracleError::Stream { index, reason });
        match update.delta {
            Delta::Insert => {
                if self.edges.contains_key(&update.edge) {
                    return fail(format!("edge {{{}}} inserted while live", update.edge));
                }
                self.edges.insert(update.edge.clone(), update.weight);
                for &v in update.edge.vertices() {
                    *self.degree.entry(v).or_insert(0) += 1;
                }
            }
            Delta::Delete => {
                match self.edges.get(&update.edge) {
                    None => return fail(format!("edge {{{}}} deleted while absent", update.edge)),
                    Some(w) if *w != update.weight => {
                        return fail(format!(
                            "edge {{{}}} deleted with weight {} but live with weight {}",
                            update.edge,
                            update.weight.get(),
                            w.get()
                        ))
                    }
                    Some(_) => {}
                }
                self.edges.remove(&update.edge);
                for &v in update.edge.vertices() {
                    let d = self.degree.get_mut(&v).expect("live edge has counted endpoints");
                    *d -= 1;
                    if *d == 0 {
                        self.degree.remove(&v);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Edge, Weight)> {
        self.edges.iter().map(|(e, w)| (e, *w))
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.edges.contains_key(edge)
    }

    pub fn weight(&self, edge: &Edge) -> Option<Weight> {
        self.edges.get(edge).copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree.get(&v).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> &BTreeMap<VertexId, usize> {
        &self.degree
    }

    pub fn max_arity(&self) -> usize {
        self.edges.keys().map(Edge::arity).max().unwrap_or(0)
    }

    pub fn to_small_graph(&self) -> SmallGraph {
        SmallGraph::new(self.edges.iter().map(|(e, w)| (e.clone(), w.get())))
    }
}

/// Replays a stream into its final graph.
pub fn materialize<'a, I>(n: u64, updates: I) -> Result<MaterializedGraph, OracleError>
where
    I: IntoIterator<Item = &'a EdgeUpdate>,
{
    let mut g = MaterializedGraph::new(n);
    for (i, u) in updates.into_iter().enumerate() {
        g.apply(i, u)?;
    }
    Ok(g)
}

/// Problems the oracle answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Matching,
    WeightedMatching,
    VertexCover,
    HittingSet,
    HypergraphMatching,
    Contraction(PropertySpec),
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Matching => f.write_str("matching"),
            Problem::WeightedMatching => f.write_str("weighted_matching"),
            Problem::VertexCover => f.write_str("vertex_cover"),
            Problem::HittingSet => f.write_str("hitting_set"),
            Problem::HypergraphMatching => f.write_str("hypergraph_matching"),
            Problem::Contraction(p) => write!(f, "contraction:{p}"),
        }
    }
}

/// Optimal answer: exhaustive enumeration within [`ENUMERATION_BUDGET`],
/// the exact solvers beyond it.
pub fn oracle_solve(graph: &MaterializedGraph, problem: Problem) -> Result<Solution, OracleError> {
    let small = graph.to_small_graph();
    match exhaustive::solve(&small, problem, ENUMERATION_BUDGET) {
        Ok(s) => Ok(s),
        Err(OracleError::Budget { .. }) => solver_solve(&small, problem),
        Err(e) => Err(e),
    }
}

/// The exact solvers, with budgets large enough to always finish.
pub fn solver_solve(small: &SmallGraph, problem: Problem) -> Result<Solution, OracleError> {
    let all = small.vertices().len();
    let found = |b: Budgeted| b.into_solution().expect("budget covers every vertex");
    Ok(match problem {
        Problem::Matching => max_matching(small)?,
        Problem::WeightedMatching => max_weight_matching(small)?,
        Problem::VertexCover => found(min_vertex_cover(small, all)?),
        Problem::HittingSet => found(min_hitting_set(small, all)?),
        Problem::HypergraphMatching => max_hypergraph_matching(small, small.num_edges())?,
        Problem::Contraction(p) => solve_contraction_property(small, p)?,
    })
}

/// Heavy vertices (degree at least `2ν+3`) and shallow edges (no heavy endpoint).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeavyShallow {
    pub threshold: usize,
    pub heavy: usize,
    pub shallow: usize,
}

pub fn heavy_shallow(graph: &MaterializedGraph, nu: u32) -> HeavyShallow {
    let threshold = 2 * nu as usize + 3;
    let heavy = graph.degrees().values().filter(|&&d| d >= threshold).count();
    let shallow = graph.edges().filter(|(e, _)| e.vertices().iter().all(|&v| graph.degree(v) < threshold)).count();
    HeavyShallow { threshold, heavy, shallow }
}

/// Brute-force enumerators over vertex subsets, edge subsets and matchings.
pub mod exhaustive {
    use super::*;
    use crate::solvers::SolutionKind;

    struct Relabeled {
        labels: Vec<VertexId>,
        /// vertex bitmask and weight per edge
        edges: Vec<(u64, f64)>,
        originals: Vec<Edge>,
    }

    fn relabel(graph: &SmallGraph) -> Result<Relabeled, OracleError> {
        let labels: Vec<VertexId> = graph.vertices().into_iter().collect();
        if labels.len() > 63 {
            return Err(OracleError::Budget { needed: u64::MAX, budget: ENUMERATION_BUDGET });
        }
        let index: BTreeMap<VertexId, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = graph
            .edges()
            .iter()
            .map(|(e, w)| (e.vertices().iter().fold(0u64, |m, v| m | 1 << index[v]), *w))
            .collect();
        let originals = graph.edges().iter().map(|(e, _)| e.clone()).collect();
        Ok(Relabeled { labels, edges, originals })
    }

    fn check(needed: u64, budget: u64) -> Result<(), OracleError> {
        if needed > budget {
            Err(OracleError::Budget { needed, budget })
        } else {
            Ok(())
        }
    }

    fn pow2(k: usize) -> u64 {
        if k >= 64 {
            u64::MAX
        } else {
            1 << k
        }
    }

    pub fn solve(graph: &SmallGraph, problem: Problem, budget: u64) -> Result<Solution, OracleError> {
        match problem {
            Problem::Matching => matching(graph, false, budget),
            Problem::WeightedMatching => matching(graph, true, budget),
            Problem::VertexCover => {
                if graph.max_arity() > 2 {
                    return Err(SolverError::NotPairwise(graph.max_arity()).into());
                }
                hitting_set(graph, SolutionKind::VertexCover, budget)
            }
            Problem::HittingSet => hitting_set(graph, SolutionKind::HittingSet, budget),
            Problem::HypergraphMatching => matching(graph, false, budget),
            Problem::Contraction(p) => contraction(graph, p, budget),
        }
    }

    /// Smallest vertex set meeting every edge, over all 2^n vertex subsets.
    pub fn hitting_set(graph: &SmallGraph, kind: SolutionKind, budget: u64) -> Result<Solution, OracleError> {
        let r = relabel(graph)?;
        let n = r.labels.len();
        check(pow2(n), budget)?;
        let mut best: Option<u64> = None;
        for mask in 0..pow2(n) {
            if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
                continue;
            }
            if r.edges.iter().all(|&(e, _)| e & mask != 0) {
                best = Some(mask);
            }
        }
        let mask = best.unwrap_or(0);
        let vertices = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| r.labels[i]).collect();
        Ok(Solution::from_vertices(kind, vertices))
    }

    /// Maximum (weight or cardinality) set of pairwise disjoint edges, by walking
    /// every matching: each edge is taken or skipped, in canonical order.
    pub fn matching(graph: &SmallGraph, weighted: bool, budget: u64) -> Result<Solution, OracleError> {
        let r = relabel(graph)?;
        struct Walk<'a> {
            edges: &'a [(u64, f64)],
            weighted: bool,
            chosen: Vec<usize>,
            best: Vec<usize>,
            best_value: f64,
            steps: u64,
            budget: u64,
        }
        impl Walk<'_> {
            fn value(&self, set: &[usize]) -> f64 {
                if self.weighted {
                    set.iter().map(|&i| self.edges[i].1).sum()
                } else {
                    set.len() as f64
                }
            }

            fn go(&mut self, i: usize, used: u64) -> bool {
                self.steps += 1;
                if self.steps > self.budget {
                    return false;
                }
                if i == self.edges.len() {
                    let v = self.value(&self.chosen);
                    if v > self.best_value {
                        self.best_value = v;
                        self.best = self.chosen.clone();
                    }
                    return true;
                }
                let (mask, _) = self.edges[i];
                if mask & used == 0 {
                    self.chosen.push(i);
                    let ok = self.go(i + 1, used | mask);
                    self.chosen.pop();
                    if !ok {
                        return false;
                    }
                }
                self.go(i + 1, used)
            }
        }
        let mut w = Walk {
            edges: &r.edges,
            weighted,
            chosen: Vec::new(),
            best: Vec::new(),
            best_value: 0.0,
            steps: 0,
            budget,
        };
        if !w.go(0, 0) {
            return Err(OracleError::Budget { needed: w.steps, budget });
        }
        let edges = w.best.iter().map(|&i| (r.originals[i].clone(), r.edges[i].1)).collect();
        Ok(Solution::from_edges(SolutionKind::Matching, edges))
    }

    /// Largest edge subset with the property, over all 2^m subsets.
    pub fn contraction(graph: &SmallGraph, prop: PropertySpec, budget: u64) -> Result<Solution, OracleError> {
        if graph.max_arity() > 2 {
            return Err(SolverError::NotPairwise(graph.max_arity()).into());
        }
        let r = relabel(graph)?;
        let m = r.edges.len();
        check(pow2(m), budget)?;
        let pairs: Vec<(usize, usize)> = r
            .edges
            .iter()
            .map(|&(mask, _)| {
                let a = mask.trailing_zeros() as usize;
                let b = 63 - mask.leading_zeros() as usize;
                (a, b)
            })
            .collect();
        let n = r.labels.len();
        let mut best: u64 = 0;
        for mask in 0..pow2(m) {
            if mask.count_ones() <= best.count_ones() {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            if has_property(&chosen, n, prop) {
                best = mask;
            }
        }
        let edges = (0..m).filter(|&i| best >> i & 1 == 1).map(|i| (r.originals[i].clone(), 1.0)).collect();
        Ok(Solution::from_edges(SolutionKind::Subgraph, edges))
    }

    /// Property membership by direct definition.
    pub fn has_property(edges: &[(usize, usize)], n: usize, prop: PropertySpec) -> bool {
        let mut deg = vec![0u32; n];
        for &(a, b) in edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        match prop {
            PropertySpec::BMatching(b) => deg.iter().all(|&d| d <= b),
            PropertySpec::MaxForest => acyclic(edges, n),
            PropertySpec::DisjointPaths => deg.iter().all(|&d| d <= 2) && acyclic(edges, n),
            PropertySpec::KColorable(k) => {
                let touched: Vec<usize> = (0..n).filter(|&v| deg[v] > 0).collect();
                let k = k as u64;
                let total = k.checked_pow(touched.len() as u32).unwrap_or(u64::MAX);
                let mut color = vec![0u64; n];
                (0..total).any(|mut code| {
                    for &v in &touched {
                        color[v] = code % k;
                        code /= k;
                    }
                    edges.iter().all(|&(a, b)| color[a] != color[b])
                })
            }
        }
    }

    /// Cycle detection by counting: a graph is a forest iff m = n − components.
    fn acyclic(edges: &[(usize, usize)], n: usize) -> bool {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut vertices = 0;
        for s in 0..n {
            if seen[s] || adj[s].is_empty() {
                continue;
            }
            components += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                vertices += 1;
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        edges.len() + components == vertices
    }
}
