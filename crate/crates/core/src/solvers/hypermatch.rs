use super::{SmallGraph, Solution, SolutionKind, SolverError};

/// Maximum set of pairwise-disjoint hyperedges.
///
/// Branch and bound on a vertex of smallest positive degree: either one of its
/// edges joins the matching, or the vertex stays unmatched. The bound is the size
/// of a greedy hitting set of the remaining edges, since a matching never exceeds
/// any hitting set. The search stops once it holds `budget + 1` edges, which is
/// enough to report that the promise `matching <= budget` is broken.
pub fn max_hypergraph_matching(graph: &SmallGraph, budget: usize) -> Result<Solution, SolverError> {
    let dense = graph.dense();
    let n = dense.n();
    let edges: Vec<&[usize]> = dense.edges.iter().map(|(e, _)| e.as_slice()).collect();
    let inc = dense.incidence();
    let mut bb = Search {
        edges: &edges,
        inc: &inc,
        alive_edge: vec![true; edges.len()],
        blocked: vec![false; n],
        chosen: Vec::new(),
        best: Vec::new(),
        stop_at: budget.saturating_add(1),
    };
    bb.run();
    let out = bb.best.iter().map(|&i| (dense.edge(i), dense.edges[i].1)).collect();
    Ok(Solution::from_edges(SolutionKind::Matching, out))
}

struct Search<'a> {
    edges: &'a [&'a [usize]],
    inc: &'a [Vec<usize>],
    alive_edge: Vec<bool>,
    blocked: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    stop_at: usize,
}

impl Search<'_> {
    fn degree(&self, v: usize) -> usize {
        self.inc[v].iter().filter(|&&e| self.alive_edge[e]).count()
    }

    fn greedy_hitting_bound(&self) -> usize {
        let mut alive = self.alive_edge.clone();
        let mut count = 0;
        loop {
            let mut best = (0, 0);
            for v in 0..self.inc.len() {
                let d = self.inc[v].iter().filter(|&&e| alive[e]).count();
                if d > best.0 {
                    best = (d, v);
                }
            }
            if best.0 == 0 {
                return count;
            }
            for &e in &self.inc[best.1] {
                alive[e] = false;
            }
            count += 1;
        }
    }

    /// Kills every live edge meeting `vertices`; returns what was killed.
    fn block(&mut self, vertices: &[usize]) -> Vec<usize> {
        let mut killed = Vec::new();
        for &v in vertices {
            self.blocked[v] = true;
            for &e in &self.inc[v] {
                if self.alive_edge[e] {
                    self.alive_edge[e] = false;
                    killed.push(e);
                }
            }
        }
        killed
    }

    fn unblock(&mut self, vertices: &[usize], killed: Vec<usize>) {
        for &v in vertices {
            self.blocked[v] = false;
        }
        for e in killed {
            self.alive_edge[e] = true;
        }
    }

    fn run(&mut self) {
        if self.best.len() >= self.stop_at {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let pivot = (0..self.inc.len())
            .filter(|&v| !self.blocked[v])
            .map(|v| (self.degree(v), v))
            .filter(|&(d, _)| d > 0)
            .min();
        let Some((_, v)) = pivot else { return };
        if self.chosen.len() + self.greedy_hitting_bound() <= self.best.len() {
            return;
        }
        let options: Vec<usize> = self.inc[v].iter().copied().filter(|&e| self.alive_edge[e]).collect();
        for e in options {
            let verts = self.edges[e];
            let killed = self.block(verts);
            self.chosen.push(e);
            self.run();
            self.chosen.pop();
            self.unblock(verts, killed);
        }
        let killed = self.block(&[v]);
        self.run();
        self.unblock(&[v], killed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Edge;

    fn hyper(sets: &[&[u32]]) -> SmallGraph {
        SmallGraph::unweighted(sets.iter().map(|s| Edge::new(s.to_vec()).unwrap()))
    }

    #[test]
    fn small_cases() {
        let m = max_hypergraph_matching(&hyper(&[&[1, 2, 3], &[4, 5, 6]]), 5).unwrap();
        assert_eq!(m.size, 2);
        assert!(m.is_disjoint());
        let sunflower = hyper(&[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7]]);
        assert_eq!(max_hypergraph_matching(&sunflower, 5).unwrap().size, 1);
        assert_eq!(max_hypergraph_matching(&SmallGraph::default(), 1).unwrap().size, 0);
    }

    #[test]
    fn needs_to_skip_the_central_edge() {
        let g = hyper(&[&[1, 2, 3], &[3, 4, 5], &[5, 6, 1], &[2, 7, 8], &[4, 9, 10], &[6, 11, 12]]);
        assert_eq!(max_hypergraph_matching(&g, 6).unwrap().size, 3);
    }

    #[test]
    fn stops_past_the_budget() {
        let g = hyper(&[&[1, 2], &[3, 4], &[5, 6], &[7, 8]]);
        assert_eq!(max_hypergraph_matching(&g, 1).unwrap().size, 2);
    }
}
