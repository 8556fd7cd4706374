use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{scale_alpha, semi_streaming_scales, weight_levels, AlgoError, EstimateReport, Flag, StreamState};
use crate::sample::{SampleSketch, SampledEdge};
use crate::solvers::{Solution, SolutionKind};
use crate::types::{Edge, VertexId};

/// Greedy matching over the monochromatic edges of a `d = 1` sample.
///
/// Repetitions are visited in order. In repetition `t`, a color is available
/// when no endpoint of the current matching has that color under `c_t`; colors
/// are visited in ascending order (heavier edges first within a color) and the
/// first edge of each available color is added. Edges of one color share no
/// endpoint with the matching, and edges of different colors are disjoint.
pub fn greedy_color_matching(sample: &SampleSketch) -> Result<(Vec<(Edge, f64)>, GreedyStats), AlgoError> {
    let sub = sample.extract_subgraph()?;
    let mut by_rep: BTreeMap<u32, Vec<&SampledEdge>> = BTreeMap::new();
    for e in &sub.edges {
        by_rep.entry(e.repetition).or_default().push(e);
    }
    let mut matched: BTreeSet<VertexId> = BTreeSet::new();
    let mut out = Vec::new();
    for (rep, mut edges) in by_rep {
        edges.sort_by(|a, b| a.colors.cmp(&b.colors).then(b.weight.cmp(&a.weight)).then(a.edge.cmp(&b.edge)));
        let h = &sample.hashes()[rep as usize];
        let mut used: BTreeSet<u32> = matched.iter().map(|&v| h.eval_unchecked(u64::from(v))).collect();
        for e in edges {
            let Some(&c) = e.colors.colors().first() else { continue };
            if used.contains(&c) || e.edge.vertices().iter().any(|v| matched.contains(v)) {
                continue;
            }
            used.insert(c);
            matched.extend(e.edge.vertices().iter().copied());
            out.push((e.edge.clone(), e.weight.get()));
        }
    }
    let stats = GreedyStats { kernel_edges: sub.edges.len(), failed_cells: sub.failed_cells, corrupt_cells: sub.corrupt_cells };
    Ok((out, stats))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GreedyStats {
    pub kernel_edges: usize,
    pub failed_cells: usize,
    pub corrupt_cells: usize,
}

fn note_cells(report: &mut EstimateReport, stats: &[GreedyStats]) {
    let failed: usize = stats.iter().map(|s| s.failed_cells).sum();
    let corrupt: usize = stats.iter().map(|s| s.corrupt_cells).sum();
    if failed > 0 {
        report.flags.push(Flag::CellFailures { count: failed });
    }
    if corrupt > 0 {
        report.flags.push(Flag::CorruptCells { count: corrupt });
    }
}

pub(super) fn finish_large(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let sample = &state.samples[0];
    let (edges, stats) = greedy_color_matching(sample)?;
    note_cells(&mut report, &[stats]);
    report.component("colors", f64::from(sample.config().colors));
    report.component("repetitions", f64::from(sample.config().repetitions));
    report.component("kernel_edges", stats.kernel_edges as f64);
    let m = Solution::from_edges(SolutionKind::Matching, edges);
    report.value = m.size as f64;
    report.certificate = Some(m);
    Ok(report)
}

/// Greedy matchings of a run of scales, computed in parallel.
fn scale_matchings(samples: &[SampleSketch]) -> Result<Vec<(Vec<(Edge, f64)>, GreedyStats)>, AlgoError> {
    samples.par_iter().map(greedy_color_matching).collect()
}

fn clamp_flags(state: &StreamState, report: &mut EstimateReport) {
    for k in semi_streaming_scales(state.n) {
        let a = scale_alpha(state.params.alpha, k);
        if a < state.params.alpha {
            report.flags.push(Flag::AlphaClamped { k, alpha: a });
        }
    }
}

pub(super) fn finish_semi(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let scales = semi_streaming_scales(state.n);
    let results = scale_matchings(&state.samples)?;
    let stats: Vec<GreedyStats> = results.iter().map(|r| r.1).collect();
    note_cells(&mut report, &stats);
    clamp_flags(state, &mut report);
    let mut best = 0;
    for (i, (edges, _)) in results.iter().enumerate() {
        report.component(&format!("scale_{}", scales[i]), edges.len() as f64);
        if edges.len() > results[best].0.len() {
            best = i;
        }
    }
    report.component("levels", scales.len() as f64);
    report.component("best_scale", scales[best] as f64);
    let m = Solution::from_edges(SolutionKind::Matching, results[best].0.clone());
    report.value = m.size as f64;
    report.certificate = Some(m);
    Ok(report)
}

pub(super) fn finish_weighted_large(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let per_level = semi_streaming_scales(state.n).len();
    let levels = weight_levels(state.params.w_max, state.params.eps);
    let results = scale_matchings(&state.samples)?;
    let stats: Vec<GreedyStats> = results.iter().map(|r| r.1).collect();
    note_cells(&mut report, &stats);
    clamp_flags(state, &mut report);
    // largest matching per weight level, then greedy from the heaviest level down
    let mut chosen: Vec<(Edge, f64)> = Vec::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    for level in (0..levels).rev() {
        let run = &results[level * per_level..(level + 1) * per_level];
        let best = run.iter().map(|r| &r.0).max_by_key(|m| m.len()).expect("at least one scale");
        report.component(&format!("level_{level}"), best.len() as f64);
        for (e, w) in best {
            if e.vertices().iter().all(|v| !used.contains(v)) {
                used.extend(e.vertices().iter().copied());
                chosen.push((e.clone(), *w));
            }
        }
    }
    report.component("levels", levels as f64);
    let m = Solution::from_edges(SolutionKind::Matching, chosen);
    report.value = m.total_weight;
    report.certificate = Some(m);
    Ok(report)
}
