use std::collections::BTreeMap;

use super::kernel::kernel;
use super::{AlgoError, AlgoParams, EstimateReport, Flag, StreamState};
use crate::hashing::{derive_seed, keyed_hash};
use crate::sketches::{KeyCodec, LinearSketch, SparseDecode, SparseRecovery};
use crate::solvers::max_matching;
use crate::types::{EdgeUpdate, VertexId};

/// Matching bound `k = ⌈2n^{2/5}⌉` of the inner exact kernel.
pub(super) fn inner_k(n: u64) -> usize {
    (2.0 * (n as f64).powf(0.4)).ceil() as usize
}

/// Whether `v` is in the vertex sample of rate `p`. Fixed per vertex, so every
/// update of an edge sees the same answer.
pub fn membership(seed: u64, p: f64, v: VertexId) -> bool {
    if p >= 1.0 {
        return true;
    }
    (keyed_hash(seed, u64::from(v)) as f64) < p * 2f64.powi(64)
}

/// Degree counters of sampled vertices and a sparse-recovery sketch of the
/// edges induced on the sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ArboricityState {
    pub(crate) p: f64,
    pub(crate) member_seed: u64,
    pub(crate) threshold: usize,
    pub(crate) degrees: BTreeMap<VertexId, i64>,
    pub(crate) induced: SparseRecovery,
    pub(crate) codec: KeyCodec,
}

impl ArboricityState {
    pub(crate) fn new(params: &AlgoParams, n: u64) -> Result<Self, AlgoError> {
        let p = params.p_override.unwrap_or_else(|| (8.0 / (params.eps * params.eps) * (n as f64).powf(-0.2)).min(1.0));
        let threshold = 2 * params.nu as usize + 3;
        // room for twice the expected sample size
        let sparsity = ((2.0 * f64::from(params.nu)) * (2.0 * n as f64 * p)).ceil().max(1.0) as usize;
        let induced = SparseRecovery::new(sparsity, params.delta, derive_seed(params.seed, &[0xa4b1]))?;
        Ok(ArboricityState {
            p,
            member_seed: derive_seed(params.seed, &[0xa4b2]),
            threshold,
            degrees: BTreeMap::new(),
            induced,
            codec: KeyCodec::new(n, 2)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn is_sampled(&self, v: VertexId) -> bool {
        membership(self.member_seed, self.p, v)
    }

    pub(crate) fn process(&mut self, update: &EdgeUpdate) -> Result<(), AlgoError> {
        let delta = update.delta.sign();
        let mut inside = true;
        for &v in update.edge.vertices() {
            if self.is_sampled(v) {
                let d = self.degrees.entry(v).or_insert(0);
                *d += delta;
                if *d == 0 {
                    self.degrees.remove(&v);
                }
            } else {
                inside = false;
            }
        }
        if inside {
            self.induced.update(self.codec.encode(&update.edge), delta);
        }
        Ok(())
    }

    pub(crate) fn merge_from(&mut self, other: &ArboricityState) -> Result<(), AlgoError> {
        if self.p.to_bits() != other.p.to_bits() || self.member_seed != other.member_seed || self.threshold != other.threshold {
            return Err(AlgoError::Mismatch("vertex sampling differs".into()));
        }
        for (&v, &d) in &other.degrees {
            let e = self.degrees.entry(v).or_insert(0);
            *e += d;
            if *e == 0 {
                self.degrees.remove(&v);
            }
        }
        self.induced.merge_from(&other.induced)?;
        Ok(())
    }

    pub(crate) fn approx_bytes(&self) -> usize {
        12 * self.degrees.len() + 40 * self.induced.occupied()
    }
}

pub(super) fn finish(state: &StreamState, mut report: EstimateReport) -> Result<EstimateReport, AlgoError> {
    let arb = state.arboricity.as_ref().expect("arboricity mode has its state");
    let (_, g) = kernel(&state.samples[0], &mut report)?;
    let r = max_matching(&g)?.size as f64;
    let heavy = |v: &VertexId| arb.degrees.get(v).is_some_and(|&d| d >= arb.threshold as i64);
    let h_z = arb.degrees.values().filter(|&&d| d >= arb.threshold as i64).count() as f64;
    let s_z = match arb.induced.decode() {
        SparseDecode::Fail => {
            report.flags.push(Flag::SparseDecodeFailed);
            0.0
        }
        SparseDecode::Decoded { items, overflow } => {
            if overflow {
                report.flags.push(Flag::SparseOverflow { budget: arb.induced.sparsity(), decoded: items.len() });
            }
            items
                .iter()
                .filter_map(|&(key, _)| arb.codec.decode(key).ok())
                .filter(|e| !e.vertices().iter().any(heavy))
                .count() as f64
        }
    };
    let p = arb.p;
    if arb.threshold as f64 > 1.0 / p {
        report.flags.push(Flag::ArboricityRegime { threshold: arb.threshold, inverse_p: 1.0 / p });
    }
    let (hp, sp) = (h_z / p, s_z / (p * p));
    report.component("r", r);
    report.component("h_z", h_z);
    report.component("s_z", s_z);
    report.component("p", p);
    report.component("h_z_over_p", hp);
    report.component("s_z_over_p2", sp);
    report.component("threshold", arb.threshold as f64);
    report.component("inner_k", inner_k(state.n) as f64);
    report.value = r.max(hp).max(sp);
    Ok(report)
}
