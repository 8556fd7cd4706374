use super::{greedy_packing, Budgeted, SmallGraph, Solution, SolutionKind, SolverError};

/// Minimum hitting set of size at most `budget`, by d-way branching on an unhit
/// hyperedge of smallest arity. Budgets are tried upward from a disjoint-packing
/// lower bound, so the first hit is minimum.
pub fn min_hitting_set(graph: &SmallGraph, budget: usize) -> Result<Budgeted, SolverError> {
    let dense = graph.dense();
    let edges: Vec<&[usize]> = dense.edges.iter().map(|(e, _)| e.as_slice()).collect();
    let lower = greedy_packing(&edges, dense.n());
    if lower > budget {
        return Ok(Budgeted::Exceeds(budget));
    }
    let inc = dense.incidence();
    for k in lower..=budget {
        let mut st = State { edges: &edges, inc: &inc, hits: vec![0; edges.len()], chosen: Vec::new() };
        if st.search(k) {
            let labels = st.chosen.iter().map(|&v| dense.labels[v]).collect();
            return Ok(Budgeted::Found(Solution::from_vertices(SolutionKind::HittingSet, labels)));
        }
    }
    Ok(Budgeted::Exceeds(budget))
}

struct State<'a> {
    edges: &'a [&'a [usize]],
    inc: &'a [Vec<usize>],
    /// How many chosen vertices hit each edge.
    hits: Vec<u32>,
    chosen: Vec<usize>,
}

impl State<'_> {
    fn choose(&mut self, v: usize) {
        self.chosen.push(v);
        for &e in &self.inc[v] {
            self.hits[e] += 1;
        }
    }

    fn unchoose(&mut self) {
        let v = self.chosen.pop().expect("nonempty");
        for &e in &self.inc[v] {
            self.hits[e] -= 1;
        }
    }

    fn search(&mut self, budget: usize) -> bool {
        let unhit: Vec<&[usize]> =
            self.edges.iter().enumerate().filter(|&(i, _)| self.hits[i] == 0).map(|(_, e)| *e).collect();
        if unhit.is_empty() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let n = self.inc.len();
        if greedy_packing(&unhit, n) > budget {
            return false;
        }
        let pivot = *unhit.iter().min_by_key(|e| e.len()).expect("nonempty");
        let mut order: Vec<(usize, usize)> = pivot
            .iter()
            .map(|&v| (self.inc[v].iter().filter(|&&e| self.hits[e] == 0).count(), v))
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, v) in order {
            self.choose(v);
            if self.search(budget - 1) {
                return true;
            }
            self.unchoose();
        }
        false
    }
}
