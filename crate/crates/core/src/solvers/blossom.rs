use std::collections::VecDeque;

use super::{SmallGraph, Solution, SolutionKind, SolverError};

pub(crate) const NONE: usize = usize::MAX;

/// Maximum-cardinality matching by Edmonds' blossom algorithm.
///
/// Starts from a greedy matching in canonical edge order, then searches one
/// alternating tree per free vertex, contracting odd cycles as they appear.
pub fn max_matching(graph: &SmallGraph) -> Result<Solution, SolverError> {
    graph.check_pairwise()?;
    let dense = graph.dense();
    let mate = dense_max_matching(dense.n(), &dense.adjacency());
    let mut edges = Vec::new();
    for (i, (e, w)) in dense.edges.iter().enumerate() {
        if mate[e[0]] == e[1] {
            edges.push((dense.edge(i), *w));
        }
    }
    Ok(Solution::from_edges(SolutionKind::Matching, edges))
}

/// Mate array of a maximum matching; `NONE` marks free vertices.
pub(crate) fn dense_max_matching(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut search = Search::new(n, adj);
    for v in 0..n {
        if search.mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| search.mate[u] == NONE && u != v) {
                search.mate[u] = v;
                search.mate[v] = u;
            }
        }
    }
    for root in 0..n {
        if search.mate[root] == NONE {
            if let Some(end) = search.find_augmenting_path(root) {
                search.augment(end);
            }
        }
    }
    search.mate
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<usize>,
    lca_stamp: usize,
    queue: VecDeque<usize>,
    // vertices whose parent/base/used state differs from the reset state
    tree: Vec<usize>,
    blossom_marks: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(n: usize, adj: &'a [Vec<usize>]) -> Self {
        Search {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![0; n],
            lca_stamp: 0,
            queue: VecDeque::new(),
            tree: Vec::new(),
            blossom_marks: Vec::new(),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.lca_stamp += 1;
        loop {
            a = self.base[a];
            self.lca_mark[a] = self.lca_stamp;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] == self.lca_stamp {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark(&mut self, b: usize) {
        if !self.in_blossom[b] {
            self.in_blossom[b] = true;
            self.blossom_marks.push(b);
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.mark(self.base[v]);
            self.mark(self.base[self.mate[v]]);
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn touch(&mut self, v: usize) {
        if !self.used[v] && self.parent[v] == NONE && self.base[v] == v {
            self.tree.push(v);
        }
    }

    fn reset(&mut self) {
        for v in self.tree.drain(..) {
            self.used[v] = false;
            self.parent[v] = NONE;
            self.base[v] = v;
        }
        self.queue.clear();
    }

    fn find_augmenting_path(&mut self, root: usize) -> Option<usize> {
        self.reset();
        self.touch(root);
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    // every vertex of the blossom is already in the tree
                    for t in 0..self.tree.len() {
                        let i = self.tree[t];
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                    for b in self.blossom_marks.drain(..) {
                        self.in_blossom[b] = false;
                    }
                } else if self.parent[to] == NONE {
                    self.touch(to);
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.touch(next);
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(pairs: &[(u32, u32)]) -> usize {
        max_matching(&SmallGraph::from_pairs(pairs.iter().copied())).unwrap().size
    }

    #[test]
    fn classic_graphs() {
        assert_eq!(size(&[(0, 1), (1, 2), (2, 3), (3, 0)]), 2);
        assert_eq!(size(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 2);
        assert_eq!(size(&[]), 0);
        // odd cycle with a pendant path forces a blossom
        assert_eq!(size(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5), (1, 6)]), 3);
    }

    #[test]
    fn petersen_graph_has_a_perfect_matching() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = SmallGraph::from_pairs(outer.chain(spokes).chain(inner));
        let m = max_matching(&g).unwrap();
        assert_eq!(m.size, 5);
        assert!(m.is_matching_of(&g));
    }

    #[test]
    fn rejects_hyperedges() {
        let g = SmallGraph::unweighted([crate::types::Edge::new(vec![1, 2, 3]).unwrap()]);
        assert_eq!(max_matching(&g), Err(SolverError::NotPairwise(3)));
    }
}
