use std::collections::BTreeSet;

use super::blossom::dense_max_matching;
use super::{Budgeted, SmallGraph, Solution, SolutionKind, SolverError, NONE};

/// Minimum vertex cover if one of size at most `budget` exists.
///
/// Tries budgets upward from the maximum-matching lower bound, each with a
/// bounded search tree: forced moves (a vertex of degree above the budget must
/// be taken; the neighbor of a degree-one vertex may be taken), then branching
/// on a maximum-degree vertex `v` into "take v" and "take all of N(v)".
pub fn min_vertex_cover(graph: &SmallGraph, budget: usize) -> Result<Budgeted, SolverError> {
    graph.check_pairwise()?;
    let dense = graph.dense();
    let adj = dense.adjacency();
    let lower = dense_max_matching(dense.n(), &adj).iter().filter(|&&m| m != NONE).count() / 2;
    if lower > budget {
        return Ok(Budgeted::Exceeds(budget));
    }
    let sets: Vec<BTreeSet<usize>> = adj.into_iter().map(|a| a.into_iter().collect()).collect();
    for k in lower..=budget {
        let mut g = sets.clone();
        if let Some(cover) = search(&mut g, k) {
            let labels = cover.into_iter().map(|v| dense.labels[v]).collect();
            return Ok(Budgeted::Found(Solution::from_vertices(SolutionKind::VertexCover, labels)));
        }
    }
    Ok(Budgeted::Exceeds(budget))
}

fn take(g: &mut [BTreeSet<usize>], v: usize) {
    let nbrs = std::mem::take(&mut g[v]);
    for u in nbrs {
        g[u].remove(&v);
    }
}

/// A cover of size at most `budget`, if any.
fn search(g: &mut Vec<BTreeSet<usize>>, mut budget: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    loop {
        let mut changed = false;
        for v in 0..g.len() {
            if g[v].len() > budget {
                if budget == 0 {
                    return None;
                }
                take(g, v);
                chosen.push(v);
                budget -= 1;
                changed = true;
            }
        }
        for v in 0..g.len() {
            if g[v].len() == 1 {
                let u = *g[v].iter().next().expect("degree one");
                if budget == 0 {
                    return None;
                }
                take(g, u);
                chosen.push(u);
                budget -= 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let edges: usize = g.iter().map(BTreeSet::len).sum::<usize>() / 2;
    if edges == 0 {
        return Some(chosen);
    }
    if budget == 0 {
        return None;
    }
    let (v, max_deg) = g.iter().enumerate().map(|(v, a)| (v, a.len())).max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
    if edges > budget * max_deg {
        return None;
    }
    let mut with_v = g.clone();
    take(&mut with_v, v);
    if let Some(mut rest) = search(&mut with_v, budget - 1) {
        chosen.push(v);
        chosen.append(&mut rest);
        return Some(chosen);
    }
    if max_deg <= budget {
        let nbrs: Vec<usize> = g[v].iter().copied().collect();
        for &u in &nbrs {
            take(g, u);
        }
        if let Some(mut rest) = search(g, budget - nbrs.len()) {
            chosen.extend(nbrs);
            chosen.append(&mut rest);
            return Some(chosen);
        }
    }
    None
}
