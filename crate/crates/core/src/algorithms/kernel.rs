use std::collections::BTreeSet;

use super::{AlgoError, EstimateReport, Flag, Representative, StreamState};
use crate::sample::{CellMode, CellQuery, SampleSketch, SampledSubgraph};
use crate::solvers::{
    max_hypergraph_matching, max_matching, max_weight_matching, min_hitting_set, min_vertex_cover,
    solve_contraction_property, Budgeted, SmallGraph, Solution,
};
use crate::types::Edge;

/// Extracts G′ and records cell diagnostics on the report.
pub(super) fn kernel(sample: &SampleSketch, report: &mut EstimateReport) -> Result<(SampledSubgraph, SmallGraph), AlgoError> {
    let sub = sample.extract_subgraph()?;
    if sub.failed_cells > 0 {
        report.flags.push(Flag::CellFailures { count: sub.failed_cells });
    }
    if sub.corrupt_cells > 0 {
        report.flags.push(Flag::CorruptCells { count: sub.corrupt_cells });
    }
    let g = SmallGraph::new(sub.distinct_edges());
    let cfg = sample.config();
    report.component("colors", f64::from(cfg.colors));
    report.component("repetitions", f64::from(cfg.repetitions));
    report.component("kernel_edges", g.num_edges() as f64);
    Ok((sub, g))
}

pub(super) fn finish_exact(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let k = state.params.k;
    let (_, g) = kernel(&state.samples[0], &mut report)?;
    let m = max_matching(&g)?;
    if m.size > k {
        report.flags.push(Flag::PromiseViolated { bound: k, observed: m.size });
    }
    match min_vertex_cover(&g, 2 * k)? {
        Budgeted::Found(c) => {
            report.component("vertex_cover", c.size as f64);
            report.vertex_cover = Some(c);
        }
        Budgeted::Exceeds(b) => report.flags.push(Flag::ExceedsBudget { budget: b }),
    }
    report.value = m.size as f64;
    report.certificate = Some(m);
    Ok(report)
}

pub(super) fn finish_weighted(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let k = state.params.k;
    let (_, g) = kernel(&state.samples[0], &mut report)?;
    let cardinality = max_matching(&g)?.size;
    if cardinality > k {
        report.flags.push(Flag::PromiseViolated { bound: k, observed: cardinality });
    }
    let m = max_weight_matching(&g)?;
    report.component("weight_classes", state.samples[0].weight_classes().len() as f64);
    report.value = m.total_weight;
    report.certificate = Some(m);
    Ok(report)
}

pub(super) fn finish_hitting(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let k = state.params.k;
    let (_, g) = kernel(&state.samples[0], &mut report)?;
    match min_hitting_set(&g, k)? {
        Budgeted::Found(s) => {
            report.value = s.size as f64;
            report.certificate = Some(s);
        }
        Budgeted::Exceeds(b) => {
            // only a lower bound is known
            report.value = (b + 1) as f64;
            report.flags.push(Flag::ExceedsBudget { budget: b });
        }
    }
    Ok(report)
}

pub(super) fn finish_hypermatching(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let bound = (state.params.k / state.params.d.max(1)).max(1);
    let (_, g) = kernel(&state.samples[0], &mut report)?;
    let m = max_hypergraph_matching(&g, bound)?;
    if m.size > bound {
        report.flags.push(Flag::PromiseViolated { bound, observed: m.size });
    }
    report.value = m.size as f64;
    report.certificate = Some(m);
    Ok(report)
}

pub(super) fn finish_contraction(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let sample = &state.samples[0];
    let prop = state.params.property;
    let mut best: Option<(u32, Solution)> = None;
    let mut largest = 0usize;
    for g in sample.extract_contracted()? {
        let small = SmallGraph::unweighted(g.proper_edges().filter_map(|(a, b)| Edge::pair(a, b).ok()));
        largest = largest.max(small.num_edges());
        let sol = solve_contraction_property(&small, prop)?;
        if best.as_ref().is_none_or(|(_, b)| sol.size > b.size) {
            best = Some((g.repetition, sol));
        }
    }
    let (trial, sol) = best.expect("at least one trial");
    let spanned: BTreeSet<u32> = sol.edges.iter().flat_map(|e| e.vertices().iter().copied()).collect();
    if spanned.len() > state.params.k {
        report.flags.push(Flag::PromiseViolated { bound: state.params.k, observed: spanned.len() });
    }
    let counter = sample.config().cell_mode == CellMode::Counter;
    if counter && !sol.edges.is_empty() {
        report.flags.push(Flag::NoRepresentatives);
    }
    report.representatives = sol
        .edges
        .iter()
        .map(|e| Representative { contracted: e.clone(), stream_edge: if counter { None } else { representative(sample, trial, e) } })
        .collect();
    report.component("colors", f64::from(sample.config().colors));
    report.component("trials", f64::from(sample.config().repetitions));
    report.component("best_trial", f64::from(trial));
    report.component("contracted_edges", largest as f64);
    report.value = sol.size as f64;
    report.certificate = Some(sol);
    Ok(report)
}

/// A live stream edge whose endpoint colors in `trial` are the contracted edge.
fn representative(sample: &SampleSketch, trial: u32, contracted: &Edge) -> Option<Edge> {
    let colors = contracted.vertices();
    sample
        .cells()
        .iter()
        .filter(|(id, _)| id.repetition == trial && id.colors.colors() == colors)
        .find_map(|(_, cell)| match cell.query() {
            CellQuery::Key(key) => sample.codec().decode(key).ok(),
            _ => None,
        })
}
