use super::{SmallGraph, Solution, SolutionKind, SolverError};

/// Maximum-weight matching by branch and bound.
///
/// Branches on the highest-degree live vertex: matched to each live neighbor
/// (heaviest first) or left unmatched. A node is pruned when its weight plus an
/// upper bound on the rest cannot beat the incumbent. The bound is the smaller of
/// half the sum of per-vertex heaviest edges and the sum of heaviest edges over a
/// vertex cover (every matching edge is charged to a distinct cover vertex).
/// Leaves hanging off the branch vertex with equal weight are interchangeable,
/// so only one of them is tried.
pub fn max_weight_matching(graph: &SmallGraph) -> Result<Solution, SolverError> {
    graph.check_pairwise()?;
    let dense = graph.dense();
    let n = dense.n();
    let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n];
    for (i, (e, w)) in dense.edges.iter().enumerate() {
        adj[e[0]].push((e[1], *w, i));
        adj[e[1]].push((e[0], *w, i));
    }
    for a in &mut adj {
        a.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.2.cmp(&y.2)));
    }
    let scale = dense.edges.iter().map(|(_, w)| w.abs()).fold(1.0, f64::max);
    let mut bb = Search {
        edges: &dense.edges,
        adj,
        alive: vec![true; n],
        chosen: Vec::new(),
        current: 0.0,
        best: Vec::new(),
        best_weight: 0.0,
        tolerance: 1e-9 * scale,
    };
    bb.seed_greedy();
    bb.run();
    let edges = bb.best.iter().map(|&i| (dense.edge(i), dense.edges[i].1)).collect();
    Ok(Solution::from_edges(SolutionKind::Matching, edges))
}

struct Search<'a> {
    edges: &'a [(Vec<usize>, f64)],
    adj: Vec<Vec<(usize, f64, usize)>>,
    alive: Vec<bool>,
    chosen: Vec<usize>,
    current: f64,
    best: Vec<usize>,
    best_weight: f64,
    tolerance: f64,
}

impl Search<'_> {
    fn seed_greedy(&mut self) {
        let mut order: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].1 > 0.0).collect();
        order.sort_by(|&a, &b| self.edges[b].1.total_cmp(&self.edges[a].1).then(a.cmp(&b)));
        let mut used = vec![false; self.alive.len()];
        for i in order {
            let e = &self.edges[i].0;
            if !used[e[0]] && !used[e[1]] {
                used[e[0]] = true;
                used[e[1]] = true;
                self.best.push(i);
                self.best_weight += self.edges[i].1;
            }
        }
    }

    fn live_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&(u, w, _)| self.alive[u] && w > 0.0).count()
    }

    fn heaviest(&self, v: usize) -> f64 {
        self.adj[v]
            .iter()
            .find(|&&(u, w, _)| self.alive[u] && w > 0.0)
            .map_or(0.0, |&(_, w, _)| w)
    }

    fn upper_bound(&self) -> f64 {
        let n = self.alive.len();
        let mut half_sum = 0.0;
        let mut matched = vec![false; n];
        let mut cover_sum = 0.0;
        for v in 0..n {
            if !self.alive[v] {
                continue;
            }
            half_sum += self.heaviest(v);
        }
        // endpoints of a maximal matching form a vertex cover
        for v in 0..n {
            if !self.alive[v] || matched[v] {
                continue;
            }
            if let Some(&(u, _, _)) = self.adj[v].iter().find(|&&(u, w, _)| self.alive[u] && !matched[u] && w > 0.0) {
                matched[u] = true;
                matched[v] = true;
                cover_sum += self.heaviest(u) + self.heaviest(v);
            }
        }
        (half_sum / 2.0).min(cover_sum)
    }

    fn run(&mut self) {
        let mut branch = None;
        let mut best_deg = 0;
        for v in 0..self.alive.len() {
            if self.alive[v] {
                let d = self.live_degree(v);
                if d > best_deg {
                    best_deg = d;
                    branch = Some(v);
                }
            }
        }
        let Some(v) = branch else {
            if self.current > self.best_weight + self.tolerance {
                self.best_weight = self.current;
                self.best = self.chosen.clone();
            }
            return;
        };
        if self.current + self.upper_bound() <= self.best_weight + self.tolerance {
            return;
        }
        let options: Vec<(usize, f64, usize)> =
            self.adj[v].iter().copied().filter(|&(u, w, _)| self.alive[u] && w > 0.0).collect();
        let mut tried_leaf: Option<f64> = None;
        self.alive[v] = false;
        for (u, w, idx) in options {
            if self.live_degree(u) == 0 {
                // u's only live neighbor was v
                if tried_leaf.is_some_and(|t| t.to_bits() == w.to_bits()) {
                    continue;
                }
                tried_leaf = Some(w);
            }
            self.alive[u] = false;
            self.chosen.push(idx);
            self.current += w;
            self.run();
            self.current -= w;
            self.chosen.pop();
            self.alive[u] = true;
        }
        self.run();
        self.alive[v] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Edge;

    fn weighted(edges: &[(u32, u32, f64)]) -> SmallGraph {
        SmallGraph::new(edges.iter().map(|&(u, v, w)| (Edge::pair(u, v).unwrap(), w)))
    }

    #[test]
    fn small_cases() {
        assert_eq!(max_weight_matching(&weighted(&[(0, 1, 3.5)])).unwrap().total_weight, 3.5);
        assert_eq!(max_weight_matching(&weighted(&[(0, 1, 1.0), (1, 2, 2.0)])).unwrap().total_weight, 2.0);
        // heavier pair of outer edges beats the middle edge
        let g = weighted(&[(0, 1, 2.0), (1, 2, 3.0), (2, 3, 2.0)]);
        let m = max_weight_matching(&g).unwrap();
        assert_eq!(m.total_weight, 4.0);
        assert!(m.is_matching_of(&g));
        assert_eq!(max_weight_matching(&SmallGraph::default()).unwrap().size, 0);
    }

    #[test]
    fn star_with_many_equal_leaves() {
        let mut edges: Vec<(u32, u32, f64)> = (1..200).map(|i| (0, i, 5.0)).collect();
        edges.extend((201..400).map(|i| (200, i, 5.0)));
        edges.push((0, 200, 1.0));
        let m = max_weight_matching(&weighted(&edges)).unwrap();
        assert_eq!(m.total_weight, 10.0);
    }
}
