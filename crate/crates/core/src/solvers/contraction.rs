use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::blossom::dense_max_matching;
use super::{SmallGraph, Solution, SolutionKind, SolverError, NONE};
use crate::types::Edge;

/// Subgraph properties closed under vertex contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PropertySpec {
    /// Every vertex has degree at most `b`.
    BMatching(u32),
    /// Acyclic.
    MaxForest,
    /// Vertex-disjoint union of simple paths.
    DisjointPaths,
    /// Properly colorable with `k` colors.
    KColorable(u32),
}

impl fmt::Display for PropertySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertySpec::BMatching(b) => write!(f, "b_matching({b})"),
            PropertySpec::MaxForest => f.write_str("max_forest"),
            PropertySpec::DisjointPaths => f.write_str("disjoint_paths"),
            PropertySpec::KColorable(k) => write!(f, "k_colorable({k})"),
        }
    }
}

impl FromStr for PropertySpec {
    type Err = SolverError;

    /// Accepts `b_matching(2)`, `b_matching:2`, `max_forest`, `disjoint_paths`,
    /// `k_colorable(3)`; `matching` is `b_matching(1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SolverError::UnsupportedProperty(s.to_string());
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        let (name, arg) = match t.find(['(', ':', '=']) {
            Some(i) => {
                let rest = t[i + 1..].trim_end_matches(')');
                (&t[..i], Some(rest.trim().parse::<u32>().map_err(|_| bad())?))
            }
            None => (t.as_str(), None),
        };
        match (name.trim(), arg) {
            ("b_matching" | "bmatching", Some(b)) if b > 0 => Ok(PropertySpec::BMatching(b)),
            ("matching", None) => Ok(PropertySpec::BMatching(1)),
            ("max_forest" | "forest", None) => Ok(PropertySpec::MaxForest),
            ("disjoint_paths" | "paths", None) => Ok(PropertySpec::DisjointPaths),
            ("k_colorable" | "colorable", Some(k)) if k > 0 => Ok(PropertySpec::KColorable(k)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for PropertySpec {
    type Error = SolverError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PropertySpec> for String {
    fn from(p: PropertySpec) -> String {
        p.to_string()
    }
}

impl PropertySpec {
    /// Whether the edge set (a subgraph) has the property.
    pub fn holds(&self, edges: &[Edge]) -> bool {
        let g = SmallGraph::unweighted(edges.iter().cloned());
        if g.num_edges() != edges.len() || g.check_pairwise().is_err() {
            return false;
        }
        let dense = g.dense();
        let mut deg = vec![0u32; dense.n()];
        for (e, _) in &dense.edges {
            deg[e[0]] += 1;
            deg[e[1]] += 1;
        }
        match *self {
            PropertySpec::BMatching(b) => deg.iter().all(|&d| d <= b),
            PropertySpec::MaxForest => is_acyclic(&dense.edges, dense.n()),
            PropertySpec::DisjointPaths => deg.iter().all(|&d| d <= 2) && is_acyclic(&dense.edges, dense.n()),
            PropertySpec::KColorable(k) => {
                let adj = dense.adjacency();
                let mut color = vec![u32::MAX; dense.n()];
                colorable(&adj, &mut color, 0, k)
            }
        }
    }
}

fn colorable(adj: &[Vec<usize>], color: &mut [u32], v: usize, k: u32) -> bool {
    if v == adj.len() {
        return true;
    }
    let used = color[..v].iter().copied().filter(|&c| c != u32::MAX).max().map_or(0, |m| m + 1);
    for c in 0..k.min(used + 1) {
        if adj[v].iter().all(|&u| color[u] != c) {
            color[v] = c;
            if colorable(adj, color, v + 1, k) {
                return true;
            }
        }
    }
    color[v] = u32::MAX;
    false
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn is_acyclic(edges: &[(Vec<usize>, f64)], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    edges.iter().all(|(e, _)| {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        parent[a] = b;
        a != b
    })
}

/// Largest subgraph of `graph` (by edge count) with property `prop`.
///
/// Edge weights are ignored: the contracted graph's multiplicities only say an
/// edge is present.
pub fn solve_contraction_property(graph: &SmallGraph, prop: PropertySpec) -> Result<Solution, SolverError> {
    graph.check_pairwise()?;
    let dense = graph.dense();
    let picked: Vec<usize> = match prop {
        PropertySpec::BMatching(0) | PropertySpec::KColorable(0) => {
            return Err(SolverError::UnsupportedProperty(prop.to_string()))
        }
        PropertySpec::BMatching(b) => b_matching(&dense.edges, dense.n(), b as usize),
        PropertySpec::MaxForest => {
            let mut parent: Vec<usize> = (0..dense.n()).collect();
            (0..dense.edges.len())
                .filter(|&i| {
                    let e = &dense.edges[i].0;
                    let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
                    parent[a] = b;
                    a != b
                })
                .collect()
        }
        PropertySpec::DisjointPaths => linear_forest(&dense.edges, dense.n()),
        PropertySpec::KColorable(k) => max_k_cut(&dense.adjacency(), &dense.edges, k as usize),
    };
    let edges = picked.into_iter().map(|i| (dense.edge(i), 1.0)).collect();
    Ok(Solution::from_edges(SolutionKind::Subgraph, edges))
}

/// Simple b-matching through the gadget of Tutte: vertex `v` becomes `b` copies,
/// edge `uv` becomes a pair `x_u - x_v` with `x_u` joined to all copies of `u`.
/// An edge is selected when both of its gadget ends match copies.
fn b_matching(edges: &[(Vec<usize>, f64)], n: usize, b: usize) -> Vec<usize> {
    if b == 1 {
        let mut adj = vec![Vec::new(); n];
        for (e, _) in edges {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        let mate = dense_max_matching(n, &adj);
        return (0..edges.len()).filter(|&i| mate[edges[i].0[0]] == edges[i].0[1]).collect();
    }
    let mut deg = vec![0usize; n];
    for (e, _) in edges {
        deg[e[0]] += 1;
        deg[e[1]] += 1;
    }
    // a vertex never needs more copies than its degree
    let caps: Vec<usize> = deg.iter().map(|&d| d.min(b)).collect();
    let mut first_copy = Vec::with_capacity(n);
    let mut total = 0;
    for &c in &caps {
        first_copy.push(total);
        total += c;
    }
    let gadget_base = total;
    let size = total + 2 * edges.len();
    let mut adj = vec![Vec::new(); size];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for (i, (e, _)) in edges.iter().enumerate() {
        let (xu, xv) = (gadget_base + 2 * i, gadget_base + 2 * i + 1);
        link(xu, xv, &mut adj);
        for c in 0..caps[e[0]] {
            link(first_copy[e[0]] + c, xu, &mut adj);
        }
        for c in 0..caps[e[1]] {
            link(first_copy[e[1]] + c, xv, &mut adj);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mate = dense_max_matching(size, &adj);
    (0..edges.len())
        .filter(|&i| {
            let (xu, xv) = (gadget_base + 2 * i, gadget_base + 2 * i + 1);
            mate[xu] != NONE && mate[xu] < gadget_base && mate[xv] != NONE && mate[xv] < gadget_base
        })
        .collect()
}

/// Maximum edge set that is a disjoint union of paths, by include/exclude
/// branching over edges with a degree-capacity bound.
fn linear_forest(edges: &[(Vec<usize>, f64)], n: usize) -> Vec<usize> {
    struct Lf<'a> {
        edges: &'a [(Vec<usize>, f64)],
        deg: Vec<usize>,
        parent: Vec<usize>,
        chosen: Vec<usize>,
        best: Vec<usize>,
        /// remaining[i][v]: edges at index >= i touching v
        remaining: Vec<BTreeMap<usize, usize>>,
    }
    impl Lf<'_> {
        fn root(&self, mut x: usize) -> usize {
            while self.parent[x] != x {
                x = self.parent[x];
            }
            x
        }

        fn bound(&self, i: usize) -> usize {
            let left = self.edges.len() - i;
            let cap: usize = self.remaining[i].iter().map(|(&v, &c)| c.min(2 - self.deg[v])).sum();
            left.min(cap / 2)
        }

        fn run(&mut self, i: usize) {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            if i == self.edges.len() || self.chosen.len() + self.bound(i) <= self.best.len() {
                return;
            }
            let (u, v) = (self.edges[i].0[0], self.edges[i].0[1]);
            if self.deg[u] < 2 && self.deg[v] < 2 {
                let (ru, rv) = (self.root(u), self.root(v));
                if ru != rv {
                    // no path compression, so the link is undone exactly
                    self.parent[ru] = rv;
                    self.deg[u] += 1;
                    self.deg[v] += 1;
                    self.chosen.push(i);
                    self.run(i + 1);
                    self.chosen.pop();
                    self.deg[u] -= 1;
                    self.deg[v] -= 1;
                    self.parent[ru] = ru;
                }
            }
            self.run(i + 1);
        }
    }
    let mut remaining = vec![BTreeMap::new(); edges.len() + 1];
    for i in (0..edges.len()).rev() {
        let mut m = remaining[i + 1].clone();
        for &v in &edges[i].0 {
            *m.entry(v).or_insert(0) += 1;
        }
        remaining[i] = m;
    }
    let mut lf = Lf { edges, deg: vec![0; n], parent: (0..n).collect(), chosen: Vec::new(), best: Vec::new(), remaining };
    lf.run(0);
    lf.best
}

/// Maximum k-colorable subgraph, i.e. max k-cut, by coloring vertices in
/// decreasing degree order; a vertex may open at most one new color.
fn max_k_cut(adj: &[Vec<usize>], edges: &[(Vec<usize>, f64)], k: usize) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // edges to earlier vertices in the order, and edges still undecided after step i
    let back: Vec<Vec<usize>> =
        order.iter().map(|&v| adj[v].iter().copied().filter(|&u| pos[u] < pos[v]).collect()).collect();
    let mut undecided = vec![0usize; n + 1];
    for i in (0..n).rev() {
        undecided[i] = undecided[i + 1] + back[i].len();
    }
    struct Kc<'a> {
        order: &'a [usize],
        back: &'a [Vec<usize>],
        undecided: &'a [usize],
        k: usize,
        color: Vec<usize>,
        best: usize,
        best_color: Vec<usize>,
    }
    impl Kc<'_> {
        fn run(&mut self, i: usize, cut: usize, used: usize) {
            if cut + self.undecided[i] <= self.best && !self.best_color.is_empty() {
                return;
            }
            if i == self.order.len() {
                self.best = cut;
                self.best_color = self.color.clone();
                return;
            }
            let v = self.order[i];
            let mut gains: Vec<(usize, usize)> = (0..self.k.min(used + 1))
                .map(|c| (self.back[i].iter().filter(|&&u| self.color[u] != c).count(), c))
                .collect();
            gains.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (g, c) in gains {
                self.color[v] = c;
                self.run(i + 1, cut + g, used.max(c + 1));
            }
            self.color[v] = usize::MAX;
        }
    }
    let mut kc = Kc { order: &order, back: &back, undecided: &undecided, k, color: vec![usize::MAX; n], best: 0, best_color: Vec::new() };
    kc.run(0, 0, 0);
    let color = kc.best_color;
    (0..edges.len()).filter(|&i| color[edges[i].0[0]] != color[edges[i].0[1]]).collect()
}
