use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{generate, GeneratorSpec, StreamError};
use crate::algorithms::{AlgoError, AlgoParams, EstimateReport, Mode, StreamState};
use crate::sample::SpaceReport;
use crate::hashing::derive_seed;
use crate::oracle::{materialize, oracle_solve, MaterializedGraph, OracleError, Problem};
use crate::solvers::Solution;

/// Named pass/fail checks of one result against the oracle.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Verdict {
    pub checks: BTreeMap<String, bool>,
    pub oracle: BTreeMap<String, f64>,
}

impl Verdict {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Every certificate edge is live and no two share a vertex.
fn live_matching(s: &Solution, g: &MaterializedGraph) -> bool {
    s.is_disjoint() && s.edges.iter().all(|e| g.contains(e))
}

fn covers(s: &Solution, g: &MaterializedGraph) -> bool {
    s.hits_all(g.edges().map(|(e, _)| e))
}

/// Checks a report against the materialized graph of its stream.
pub fn judge(report: &EstimateReport, g: &MaterializedGraph) -> Result<Verdict, OracleError> {
    let mut v = Verdict::default();
    let p = &report.params;
    let value = report.value;
    let cert = report.certificate.as_ref();
    match report.mode {
        Mode::ExactMatching => {
            let m = oracle_solve(g, Problem::Matching)?.size;
            let c = oracle_solve(g, Problem::VertexCover)?.size;
            v.oracle.insert("matching".into(), m as f64);
            v.oracle.insert("vertex_cover".into(), c as f64);
            v.check("matching_equal", value as usize == m);
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
            let cover = report.vertex_cover.as_ref();
            v.check("cover_equal", cover.is_some_and(|s| s.size == c));
            v.check("cover_valid", cover.is_some_and(|s| covers(s, g)));
        }
        Mode::WeightedMatching => {
            let w = oracle_solve(g, Problem::WeightedMatching)?.total_weight;
            v.oracle.insert("weight".into(), w);
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
            if p.round {
                v.check("weight_within_1_plus_eps", value >= w * (1.0 - 1e-9) && value <= w * (1.0 + p.eps) * (1.0 + 1e-9));
            } else {
                v.check("weight_equal", close(value, w));
            }
        }
        Mode::LargeMatching => {
            let m = oracle_solve(g, Problem::Matching)?.size;
            v.oracle.insert("matching".into(), m as f64);
            let target = ((1.0 - p.eps) * p.k as f64 / (2.0 * p.alpha)).ceil();
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
            v.check("at_most_oracle", value <= m as f64);
            v.check("meets_target", value >= target);
        }
        Mode::SemiStreaming => {
            let m = oracle_solve(g, Problem::Matching)?.size as f64;
            v.oracle.insert("matching".into(), m);
            let lower = m * (1.0 - p.eps) / (2.0 * p.alpha);
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
            v.check("at_most_oracle", value <= m);
            v.check("within_bound", value >= lower);
        }
        Mode::WeightedLarge => {
            let w = oracle_solve(g, Problem::WeightedMatching)?.total_weight;
            v.oracle.insert("weight".into(), w);
            let beta = 2.0 * p.alpha / (1.0 - p.eps).max(f64::MIN_POSITIVE);
            let lower = w / (2.0 * (1.0 + p.eps) * beta);
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
            v.check("at_most_oracle", value <= w * (1.0 + 1e-9));
            v.check("within_bound", value >= lower);
        }
        Mode::Arboricity => {
            let m = oracle_solve(g, Problem::Matching)?.size as f64;
            v.oracle.insert("matching".into(), m);
            let f = (5.0 * f64::from(p.nu) + 9.0) * (1.0 + p.eps).powi(2);
            v.check("within_factor", value / f <= m && m <= value * f);
            let c = &report.components;
            let max = c["r"].max(c["h_z_over_p"]).max(c["s_z_over_p2"]);
            v.check("value_is_max_of_components", value == max);
        }
        Mode::HittingSet => {
            let h = oracle_solve(g, Problem::HittingSet)?.size;
            v.oracle.insert("hitting_set".into(), h as f64);
            v.check("size_equal", cert.is_some_and(|s| s.size == h));
            v.check("covers_all", cert.is_some_and(|s| covers(s, g)));
        }
        Mode::HypergraphMatching => {
            let m = oracle_solve(g, Problem::HypergraphMatching)?.size;
            v.oracle.insert("hypergraph_matching".into(), m as f64);
            v.check("size_equal", value as usize == m);
            v.check("matching_valid", cert.is_some_and(|s| live_matching(s, g)));
        }
        Mode::Contraction => {
            let o = oracle_solve(g, Problem::Contraction(p.property))?.size;
            v.oracle.insert("optimum".into(), o as f64);
            v.check("size_equal", value as usize == o);
            v.check("certificate_has_property", cert.is_some_and(|s| p.property.holds(&s.edges)));
        }
    }
    Ok(v)
}

/// The oracle's answer to the question a mode estimates, in the report schema.
/// Approximate matching modes get the exact maximum matching.
pub fn oracle_report(mode: Mode, params: &AlgoParams, g: &MaterializedGraph) -> Result<EstimateReport, OracleError> {
    let problem = match mode {
        Mode::ExactMatching | Mode::LargeMatching | Mode::SemiStreaming | Mode::Arboricity => Problem::Matching,
        Mode::WeightedMatching | Mode::WeightedLarge => Problem::WeightedMatching,
        Mode::HittingSet => Problem::HittingSet,
        Mode::HypergraphMatching => Problem::HypergraphMatching,
        Mode::Contraction => Problem::Contraction(params.property),
    };
    let sol = oracle_solve(g, problem)?;
    let vertex_cover = match mode {
        Mode::ExactMatching => Some(oracle_solve(g, Problem::VertexCover)?),
        _ => None,
    };
    let mut components = BTreeMap::new();
    components.insert("live_edges".to_string(), g.num_edges() as f64);
    if let Some(c) = &vertex_cover {
        components.insert("vertex_cover".to_string(), c.size as f64);
    }
    let value = match problem {
        Problem::WeightedMatching => sol.total_weight,
        _ => sol.size as f64,
    };
    Ok(EstimateReport {
        mode,
        params: params.clone(),
        n: g.n,
        value,
        certificate: Some(sol),
        vertex_cover,
        components,
        representatives: Vec::new(),
        space: SpaceReport::default(),
        flags: Vec::new(),
        success: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub check: String,
    pub passed: usize,
    pub trials: usize,
    pub rate: f64,
}

/// Success rates of one mode over a seed sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareTable {
    pub mode: Mode,
    pub trials: usize,
    pub rows: Vec<CompareRow>,
    pub mean_value: f64,
    pub mean_cells: f64,
    pub max_cells: usize,
    pub mean_kernel_edges: f64,
    pub mean_millis: f64,
}

impl CompareTable {
    pub fn rate(&self, check: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.check == check).map(|r| r.rate)
    }
}

impl fmt::Display for CompareTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode {}  trials {}", self.mode, self.trials)?;
        writeln!(f, "{:<28} {:>10} {:>7}", "check", "passed", "rate")?;
        for r in &self.rows {
            writeln!(f, "{:<28} {:>10} {:>7.3}", r.check, format!("{}/{}", r.passed, r.trials), r.rate)?;
        }
        write!(
            f,
            "mean value {:.3}  mean cells {:.1}  mean kernel edges {:.1}  mean ms {:.1}",
            self.mean_value, self.mean_cells, self.mean_kernel_edges, self.mean_millis
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Algo(#[from] AlgoError),
}

struct Trial {
    verdict: Verdict,
    value: f64,
    cells: usize,
    kernel_edges: f64,
    millis: f64,
}

/// Runs `trials` independent (stream, sketch) pairs in parallel. Trial `t`
/// generates with seed `spec.seed + t` and sketches with a seed derived from
/// `params.seed` and `t`.
pub fn compare(mode: Mode, params: &AlgoParams, spec: &GeneratorSpec, trials: usize) -> Result<CompareTable, CompareError> {
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Trial, CompareError> {
            let gen = generate(&spec.clone().with_seed(spec.seed.wrapping_add(t as u64)))?;
            let graph = materialize(gen.stream.header.n, &gen.stream.updates)?;
            let mut p = params.clone();
            p.seed = derive_seed(params.seed, &[t as u64]);
            let start = Instant::now();
            let mut state = StreamState::new(mode, p, gen.stream.header.n)?;
            state.process_batch(&gen.stream.updates)?;
            let report = state.finish()?;
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let verdict = judge(&report, &graph)?;
            Ok(Trial {
                verdict,
                value: report.value,
                cells: report.space.cells,
                kernel_edges: report.components.get("kernel_edges").copied().unwrap_or(0.0),
                millis,
            })
        })
        .collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &results {
        for (name, &ok) in &r.verdict.checks {
            *counts.entry(name.clone()).or_insert(0) += usize::from(ok);
        }
        *counts.entry("all".into()).or_insert(0) += usize::from(r.verdict.passed());
    }
    let denom = trials.max(1) as f64;
    let rows = counts
        .into_iter()
        .map(|(check, passed)| CompareRow { check, passed, trials, rate: passed as f64 / denom })
        .collect();
    let mean = |f: &dyn Fn(&Trial) -> f64| results.iter().map(f).sum::<f64>() / denom;
    Ok(CompareTable {
        mode,
        trials,
        rows,
        mean_value: mean(&|t| t.value),
        mean_cells: mean(&|t| t.cells as f64),
        max_cells: results.iter().map(|t| t.cells).max().unwrap_or(0),
        mean_kernel_edges: mean(&|t| t.kernel_edges),
        mean_millis: mean(&|t| t.millis),
    })
}
