//! Streaming algorithms built on the sampling sketch.
//!
//! Every algorithm is a [`StreamState`]: it is created from a [`Mode`] and
//! [`AlgoParams`], fed updates, optionally merged with states built on other
//! shards of the same stream, and finished into an [`EstimateReport`]. The free
//! functions ([`exact_small_matching`] and friends) run that cycle over a slice.

mod arboricity;
mod kernel;
mod large;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sample::{CellMode, SampleConfig, SampleError, SampleSketch, SpaceReport};
use crate::sketches::SketchError;
use crate::solvers::{PropertySpec, Solution, SolverError};
use crate::types::{Edge, EdgeUpdate, Weight};

pub use arboricity::{membership, ArboricityState};
pub use large::greedy_color_matching;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgoError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot merge states: {0}")]
    Mismatch(String),
}

/// Which algorithm a state runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact matching and vertex cover under `matching ≤ k`.
    ExactMatching,
    /// Exact (or `(1+ε)`-rounded) maximum weight matching under `matching ≤ k`.
    WeightedMatching,
    /// Greedy matching of size about `k/(2α)` when `matching ≥ k`.
    LargeMatching,
    /// Matching size estimate at every scale `k = 1, 2, 4, …, n`.
    SemiStreaming,
    /// Weighted estimate by layering weights in powers of `1+ε`.
    WeightedLarge,
    /// Matching size estimate for arboricity at most `ν`.
    Arboricity,
    /// Minimum hitting set of a `d`-uniform hypergraph under `hs ≤ k`.
    HittingSet,
    /// Maximum hypergraph matching under `matching ≤ k/d`.
    HypergraphMatching,
    /// Largest subgraph with a contraction-closed property.
    Contraction,
}

impl Mode {
    pub const ALL: [Mode; 9] = [
        Mode::ExactMatching,
        Mode::WeightedMatching,
        Mode::LargeMatching,
        Mode::SemiStreaming,
        Mode::WeightedLarge,
        Mode::Arboricity,
        Mode::HittingSet,
        Mode::HypergraphMatching,
        Mode::Contraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::ExactMatching => "exact-matching",
            Mode::WeightedMatching => "weighted-matching",
            Mode::LargeMatching => "large-matching",
            Mode::SemiStreaming => "semi-streaming",
            Mode::WeightedLarge => "weighted-large",
            Mode::Arboricity => "arboricity",
            Mode::HittingSet => "hitting-set",
            Mode::HypergraphMatching => "hypergraph-matching",
            Mode::Contraction => "contraction",
        }
    }

    /// Arity the mode's sketches must accept.
    pub fn max_arity(self, params: &AlgoParams) -> usize {
        match self {
            Mode::HittingSet | Mode::HypergraphMatching => params.d.max(2),
            _ => 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        Mode::ALL.into_iter().find(|m| m.name() == t).ok_or_else(|| {
            let names: Vec<&str> = Mode::ALL.iter().map(|m| m.name()).collect();
            format!("unknown mode '{s}' (expected one of {})", names.join(", "))
        })
    }
}

/// Parameters shared by all algorithms. Unused fields are ignored by a mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub k: usize,
    pub alpha: f64,
    pub eps: f64,
    pub nu: u32,
    pub d: usize,
    pub r_const: f64,
    pub b_const: f64,
    /// Cap on the hash independence `t = min(2k, t_cap)`.
    pub t_cap: usize,
    /// Independent trials for contraction search.
    pub reps: u32,
    pub seed: u64,
    /// Per-cell failure probability of ℓ0 and sparse-recovery sketches.
    pub delta: f64,
    /// Overrides each mode's default cell sketch.
    pub cell_mode: Option<CellMode>,
    /// Round weights up to powers of `1+ε` (weighted matching).
    pub round: bool,
    /// Largest weight (weighted-large).
    pub w_max: f64,
    /// Overrides the arboricity vertex sampling rate.
    pub p_override: Option<f64>,
    pub property: PropertySpec,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            k: 4,
            alpha: 1.0,
            eps: 0.5,
            nu: 1,
            d: 2,
            r_const: 5.0,
            b_const: 100.0,
            t_cap: 64,
            reps: 5,
            seed: 0,
            delta: 0.01,
            cell_mode: None,
            round: false,
            w_max: 1.0,
            p_override: None,
            property: PropertySpec::BMatching(1),
        }
    }
}

impl AlgoParams {
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_nu(mut self, nu: u32) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_property(mut self, p: PropertySpec) -> Self {
        self.property = p;
        self
    }

    pub fn with_rounding(mut self, round: bool) -> Self {
        self.round = round;
        self
    }

    pub fn with_w_max(mut self, w_max: f64) -> Self {
        self.w_max = w_max;
        self
    }

    pub fn with_cell_mode(mut self, mode: CellMode) -> Self {
        self.cell_mode = Some(mode);
        self
    }

    pub fn validate(&self, mode: Mode) -> Result<(), AlgoError> {
        let bad = |m: String| Err(AlgoError::Params(m));
        if self.k == 0 && mode != Mode::SemiStreaming && mode != Mode::WeightedLarge && mode != Mode::Arboricity {
            return bad("k must be at least 1".into());
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return bad(format!("alpha {} must be at least 1", self.alpha));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return bad(format!("eps {} outside (0,1]", self.eps));
        }
        if self.nu == 0 {
            return bad("nu must be at least 1".into());
        }
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if !(self.r_const > 0.0 && self.b_const > 0.0) {
            return bad("r_const and b_const must be positive".into());
        }
        if self.t_cap < 2 {
            return bad("t_cap must be at least 2".into());
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta {} outside (0,1)", self.delta));
        }
        if !(self.w_max >= 1.0 && self.w_max.is_finite()) {
            return bad(format!("w_max {} must be at least 1", self.w_max));
        }
        if let Some(p) = self.p_override {
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("sampling rate {p} outside (0,1]"));
            }
        }
        if mode == Mode::LargeMatching && self.alpha * self.alpha > self.k as f64 {
            return bad(format!("alpha {} exceeds sqrt(k) = {:.3}", self.alpha, (self.k as f64).sqrt()));
        }
        Ok(())
    }

    /// `⌈r_const · log₂(k+2)⌉`, the repetition count of the exact kernels.
    pub fn log_reps(&self, k: usize) -> u32 {
        ((self.r_const * ((k + 2) as f64).log2()).ceil() as u32).max(1)
    }
}

/// Conditions attached to a result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum Flag {
    /// The kernel optimum is larger than the promised bound.
    PromiseViolated { bound: usize, observed: usize },
    /// No cover or hitting set within the budget exists in the kernel.
    ExceedsBudget { budget: usize },
    /// ℓ0 cells that returned Fail (treated as empty).
    CellFailures { count: usize },
    /// Cells whose checksum or color set did not validate.
    CorruptCells { count: usize },
    /// The induced-edge sketch held more than its budget.
    SparseOverflow { budget: usize, decoded: usize },
    /// The induced-edge sketch could not be decoded; `s_Z` was taken as 0.
    SparseDecodeFailed,
    /// `2ν+3 > 1/p`, outside the regime the estimator's analysis covers.
    ArboricityRegime { threshold: usize, inverse_p: f64 },
    /// `α` was lowered to `√k` for a small level.
    AlphaClamped { k: usize, alpha: f64 },
    /// Counter cells keep no edges, so contracted edges have no representative.
    NoRepresentatives,
}

impl Flag {
    /// Whether the flag means the answer may be wrong (as opposed to a note).
    pub fn is_failure(&self) -> bool {
        matches!(
            self,
            Flag::PromiseViolated { .. } | Flag::ExceedsBudget { .. } | Flag::SparseOverflow { .. } | Flag::SparseDecodeFailed
        )
    }
}

/// A contracted edge and, when the cells can tell, one stream edge behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Representative {
    pub contracted: Edge,
    pub stream_edge: Option<Edge>,
}

/// Result of finishing a stream state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub mode: Mode,
    pub params: AlgoParams,
    pub n: u64,
    pub value: f64,
    pub certificate: Option<Solution>,
    /// Second certificate of exact matching.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_cover: Option<Solution>,
    pub components: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<Representative>,
    pub space: SpaceReport,
    pub flags: Vec<Flag>,
    pub success: bool,
}

impl EstimateReport {
    fn new(state: &StreamState) -> Self {
        EstimateReport {
            mode: state.mode,
            params: state.params.clone(),
            n: state.n,
            value: 0.0,
            certificate: None,
            vertex_cover: None,
            components: BTreeMap::new(),
            representatives: Vec::new(),
            space: state.space_report(),
            flags: Vec::new(),
            success: true,
        }
    }

    fn component(&mut self, name: &str, value: f64) {
        self.components.insert(name.to_string(), value);
    }

    fn seal(mut self) -> Self {
        self.success = !self.flags.iter().any(Flag::is_failure);
        self
    }
}

/// Rounds `w` up to the next power of `1+ε`.
pub fn round_weight(w: f64, eps: f64) -> f64 {
    let base = 1.0 + eps;
    let exp = (w.ln() / base.ln() - 1e-9).ceil();
    base.powf(exp)
}

/// Number of weight levels `⌈log_{1+ε} w_max⌉ + 1`.
pub fn weight_levels(w_max: f64, eps: f64) -> usize {
    ((w_max.ln() / (1.0 + eps).ln() - 1e-9).ceil().max(0.0) as usize) + 1
}

/// Scales `k = 1, 2, 4, …, 2^⌈log₂ n⌉` of the semi-streaming estimate.
pub fn semi_streaming_scales(n: u64) -> Vec<usize> {
    let top = (n.max(1) as f64).log2().ceil() as u32;
    (0..=top).map(|i| 1usize << i).collect()
}

/// The mergeable state of one algorithm over one stream (or shard).
#[derive(Clone, Debug, PartialEq)]
pub struct StreamState {
    pub(crate) mode: Mode,
    pub(crate) params: AlgoParams,
    pub(crate) n: u64,
    pub(crate) samples: Vec<SampleSketch>,
    pub(crate) arboricity: Option<ArboricityState>,
}

impl StreamState {
    pub fn new(mode: Mode, params: AlgoParams, n: u64) -> Result<Self, AlgoError> {
        params.validate(mode)?;
        if n == 0 {
            return Err(AlgoError::Params("n must be positive".into()));
        }
        let configs = sample_plan(mode, &params, n)?;
        let samples = configs.into_iter().map(SampleSketch::new).collect::<Result<Vec<_>, _>>()?;
        let arboricity = match mode {
            Mode::Arboricity => Some(ArboricityState::new(&params, n)?),
            _ => None,
        };
        Ok(StreamState { mode, params, n, samples, arboricity })
    }

    pub(crate) fn from_parts(
        mode: Mode,
        params: AlgoParams,
        n: u64,
        samples: Vec<SampleSketch>,
        arboricity: Option<ArboricityState>,
    ) -> Result<Self, AlgoError> {
        let fresh = StreamState::new(mode, params.clone(), n)?;
        if fresh.samples.len() != samples.len()
            || fresh.samples.iter().zip(&samples).any(|(a, b)| a.config() != b.config() || a.hashes() != b.hashes())
        {
            return Err(AlgoError::Mismatch("sketch layout does not match the parameters".into()));
        }
        if fresh.arboricity.is_some() != arboricity.is_some() {
            return Err(AlgoError::Mismatch("arboricity state presence".into()));
        }
        Ok(StreamState { mode, params, n, samples, arboricity })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn params(&self) -> &AlgoParams {
        &self.params
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn samples(&self) -> &[SampleSketch] {
        &self.samples
    }

    pub fn arboricity(&self) -> Option<&ArboricityState> {
        self.arboricity.as_ref()
    }

    fn routed(&self, update: &EdgeUpdate) -> Result<EdgeUpdate, AlgoError> {
        if self.mode == Mode::WeightedMatching && self.params.round {
            let w = round_weight(update.weight.get(), self.params.eps);
            let w = Weight::new(w).map_err(|e| AlgoError::Params(e.to_string()))?;
            return Ok(update.clone().with_weight(w));
        }
        Ok(update.clone())
    }

    /// Whether sample `index` receives an update of weight `w`.
    fn accepts(&self, index: usize, w: f64) -> bool {
        if self.mode != Mode::WeightedLarge {
            return true;
        }
        let level = index / semi_streaming_scales(self.n).len();
        w >= (1.0 + self.params.eps).powi(level as i32) * (1.0 - 1e-12)
    }

    pub fn process(&mut self, update: &EdgeUpdate) -> Result<(), AlgoError> {
        self.process_batch(std::slice::from_ref(update))
    }

    /// Feeds a batch of updates; independent sketches are filled in parallel.
    pub fn process_batch(&mut self, updates: &[EdgeUpdate]) -> Result<(), AlgoError> {
        let routed = updates.iter().map(|u| self.routed(u)).collect::<Result<Vec<_>, _>>()?;
        let accept: Vec<Vec<bool>> = (0..self.samples.len())
            .map(|i| routed.iter().map(|u| self.accepts(i, u.weight.get())).collect())
            .collect();
        self.samples.par_iter_mut().zip(accept.par_iter()).try_for_each(|(s, acc)| {
            routed.iter().zip(acc).filter(|(_, &a)| a).try_for_each(|(u, _)| s.process_update(u))
        })?;
        if let Some(arb) = &mut self.arboricity {
            for u in &routed {
                arb.process(u)?;
            }
        }
        Ok(())
    }

    pub fn merge_from(&mut self, other: &StreamState) -> Result<(), AlgoError> {
        if self.mode != other.mode || self.params != other.params || self.n != other.n {
            return Err(AlgoError::Mismatch(format!(
                "{} (n={}) vs {} (n={}) or parameters differ",
                self.mode, self.n, other.mode, other.n
            )));
        }
        for (a, b) in self.samples.iter_mut().zip(&other.samples) {
            a.merge_from(b)?;
        }
        match (&mut self.arboricity, &other.arboricity) {
            (Some(a), Some(b)) => a.merge_from(b)?,
            (None, None) => {}
            _ => return Err(AlgoError::Mismatch("arboricity state presence".into())),
        }
        Ok(())
    }

    pub fn space_report(&self) -> SpaceReport {
        let mut total = SpaceReport::default();
        for s in &self.samples {
            total.absorb(&s.space_report());
        }
        if let Some(a) = &self.arboricity {
            total.bytes += a.approx_bytes();
        }
        total
    }

    pub fn finish(&self) -> Result<EstimateReport, AlgoError> {
        let report = EstimateReport::new(self);
        let report = match self.mode {
            Mode::ExactMatching => kernel::finish_exact(self, report)?,
            Mode::WeightedMatching => kernel::finish_weighted(self, report)?,
            Mode::HittingSet => kernel::finish_hitting(self, report)?,
            Mode::HypergraphMatching => kernel::finish_hypermatching(self, report)?,
            Mode::Contraction => kernel::finish_contraction(self, report)?,
            Mode::LargeMatching => large::finish_large(self, report)?,
            Mode::SemiStreaming => large::finish_semi(self, report)?,
            Mode::WeightedLarge => large::finish_weighted_large(self, report)?,
            Mode::Arboricity => arboricity::finish(self, report)?,
        };
        Ok(report.seal())
    }
}

/// Configuration of the exact kernel of matching size `k`: `b = b_const·k`
/// colors, pairs of colors, `⌈r_const·log₂(k+2)⌉` pairwise-independent colorings.
pub(crate) fn exact_kernel_config(params: &AlgoParams, k: usize, n: u64, seed: u64) -> SampleConfig {
    let b = (params.b_const * k as f64).ceil().max(1.0) as u32;
    SampleConfig::new(b, 2, params.log_reps(k), n)
        .with_seed(seed)
        .with_mode(params.cell_mode.unwrap_or(CellMode::XorUnique))
        .with_delta(params.delta)
}

/// Configuration for the greedy large-matching kernel at scale `k`, `α`.
pub(crate) fn large_config(params: &AlgoParams, k: usize, alpha: f64, n: u64, seed: u64) -> SampleConfig {
    let b = ((2 * k) as f64 / alpha).ceil().max(1.0) as u32;
    let r = params.r_const * k as f64 / (alpha * alpha * params.eps * params.eps) * ((k + 2) as f64).log2();
    let t = (2 * k).clamp(2, params.t_cap);
    SampleConfig::new(b, 1, (r.ceil() as u32).max(1), n)
        .with_seed(seed)
        .with_independence(t)
        .with_mode(params.cell_mode.unwrap_or(CellMode::L0))
        .with_delta(params.delta)
        .with_max_arity(2)
}

/// `α` at scale `k`: the requested value, lowered to `√k` where needed.
pub(crate) fn scale_alpha(alpha: f64, k: usize) -> f64 {
    alpha.min((k as f64).sqrt()).max(1.0)
}

fn sample_plan(mode: Mode, params: &AlgoParams, n: u64) -> Result<Vec<SampleConfig>, AlgoError> {
    use crate::hashing::derive_seed;
    let seed = params.seed;
    Ok(match mode {
        Mode::ExactMatching | Mode::WeightedMatching => vec![exact_kernel_config(params, params.k, n, seed)],
        Mode::HittingSet | Mode::HypergraphMatching => {
            let b = (params.b_const * params.k as f64).ceil().max(1.0) as u32;
            let d = params.d.max(1);
            vec![SampleConfig::new(b, d, params.log_reps(params.k), n)
                .with_seed(seed)
                .with_mode(params.cell_mode.unwrap_or(CellMode::L0))
                .with_delta(params.delta)
                .with_max_arity(d.max(2))]
        }
        Mode::Contraction => {
            let b = u32::try_from(4 * params.k * params.k).map_err(|_| AlgoError::Params("k too large".into()))?;
            vec![SampleConfig::new(b, 2, params.reps, n)
                .with_seed(seed)
                .with_mode(params.cell_mode.unwrap_or(CellMode::Counter))
                .with_delta(params.delta)]
        }
        Mode::LargeMatching => vec![large_config(params, params.k, params.alpha, n, seed)],
        Mode::SemiStreaming => semi_streaming_scales(n)
            .into_iter()
            .enumerate()
            .map(|(i, k)| large_config(params, k, scale_alpha(params.alpha, k), n, derive_seed(seed, &[0x5e41, i as u64])))
            .collect(),
        Mode::WeightedLarge => {
            let scales = semi_streaming_scales(n);
            let mut out = Vec::new();
            for _ in 0..weight_levels(params.w_max, params.eps) {
                // every weight level reuses the same colorings
                for (i, &k) in scales.iter().enumerate() {
                    let s = derive_seed(seed, &[0x5e41, i as u64]);
                    out.push(large_config(params, k, scale_alpha(params.alpha, k), n, s));
                }
            }
            out
        }
        Mode::Arboricity => {
            let k = arboricity::inner_k(n);
            vec![exact_kernel_config(params, k, n, derive_seed(seed, &[0xa4b0]))]
        }
    })
}

fn run(mode: Mode, stream: &[EdgeUpdate], n: u64, params: &AlgoParams) -> Result<EstimateReport, AlgoError> {
    let mut state = StreamState::new(mode, params.clone(), n)?;
    state.process_batch(stream)?;
    state.finish()
}

/// Maximum matching and minimum vertex cover, exact when `matching ≤ k`.
pub fn exact_small_matching(stream: &[EdgeUpdate], n: u64, params: &AlgoParams) -> Result<EstimateReport, AlgoError> {
    run(Mode::ExactMatching, stream, n, params)
}

/// Maximum weight matching, exact (or within `1+ε` with rounding) when `matching ≤ k`.
pub fn exact_small_weighted_matching(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::WeightedMatching, stream, n, params)
}

/// A matching of size at least `(1−ε)k/(2α)` w.h.p. when `matching ≥ k`.
pub fn approx_large_matching(stream: &[EdgeUpdate], n: u64, params: &AlgoParams) -> Result<EstimateReport, AlgoError> {
    run(Mode::LargeMatching, stream, n, params)
}

/// Largest matching over all scales `k = 2^i`.
pub fn semi_streaming_matching_estimate(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::SemiStreaming, stream, n, params)
}

/// Weighted matching estimate from per-weight-level cardinality estimates.
pub fn weighted_large_matching_estimate(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::WeightedLarge, stream, n, params)
}

/// `max{r, h_Z/p, s_Z/p²}` for graphs of arboricity at most `ν`.
pub fn arboricity_matching_estimate(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::Arboricity, stream, n, params)
}

/// Minimum hitting set, exact when `hs ≤ k`.
pub fn hitting_set_stream(stream: &[EdgeUpdate], n: u64, params: &AlgoParams) -> Result<EstimateReport, AlgoError> {
    run(Mode::HittingSet, stream, n, params)
}

/// Maximum hypergraph matching, exact when `matching ≤ k/d`.
pub fn hypergraph_matching_stream(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::HypergraphMatching, stream, n, params)
}

/// Largest subgraph with `params.property`, when every such subgraph spans at
/// most `k` vertices.
pub fn contraction_search_stream(
    stream: &[EdgeUpdate],
    n: u64,
    params: &AlgoParams,
) -> Result<EstimateReport, AlgoError> {
    run(Mode::Contraction, stream, n, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert_eq!("exact_matching".parse::<Mode>().unwrap(), Mode::ExactMatching);
        assert!("nope".parse::<Mode>().is_err());
    }

    #[test]
    fn rounding_and_levels() {
        let r = round_weight(7.0, 0.1);
        let expect = 1.1f64.powi((7f64.ln() / 1.1f64.ln()).ceil() as i32);
        assert!((r - expect).abs() < 1e-9);
        assert!(r >= 7.0 && r <= 7.7);
        assert_eq!(round_weight(1.0, 0.1), 1.0);
        assert_eq!(weight_levels(1.0, 0.5), 1);
        assert_eq!(weight_levels(100.0, 1.0), 8);
        assert_eq!(semi_streaming_scales(64).len(), 7);
        assert_eq!(semi_streaming_scales(100).len(), 8);
    }

    #[test]
    fn kernel_sizes_follow_the_parameters() {
        let p = AlgoParams::default().with_k(5);
        let s = StreamState::new(Mode::ExactMatching, p.clone(), 100).unwrap();
        assert_eq!(s.samples()[0].config().colors, 500);
        let s = StreamState::new(Mode::Contraction, p, 100).unwrap();
        assert_eq!(s.samples()[0].config().colors, 100);
        assert_eq!(s.samples()[0].config().repetitions, 5);
    }

    #[test]
    fn large_matching_rejects_big_alpha() {
        let p = AlgoParams::default().with_k(4).with_alpha(3.0);
        assert!(matches!(StreamState::new(Mode::LargeMatching, p, 10), Err(AlgoError::Params(_))));
    }
}
