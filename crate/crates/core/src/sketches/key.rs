use super::SketchError;
use crate::types::{Edge, VertexId};

/// Injective encoding of edges over `[0, n)` as integers: the sorted vertices
/// `v_1 < … < v_d` become `Σ v_i · n^(i−1)`.
///
/// Decoding reads base-n digits until the value is exhausted. Only the lowest
/// vertex of a sorted edge can be zero, so the digit count recovers the arity;
/// the value 0 alone means the singleton edge `{0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyCodec {
    base: u64,
    max_arity: usize,
}

impl KeyCodec {
    pub fn new(n: u64, max_arity: usize) -> Result<Self, SketchError> {
        if max_arity == 0 {
            return Err(SketchError::Invalid("max arity must be positive".into()));
        }
        let base = n.max(2);
        let mut span: u128 = 1;
        for _ in 0..max_arity {
            span *= base as u128;
            if span > i64::MAX as u128 {
                return Err(SketchError::Invalid(format!(
                    "key space {base}^{max_arity} does not fit in 63 bits"
                )));
            }
        }
        Ok(KeyCodec { base, max_arity })
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// Upper bound (exclusive) on encoded keys.
    pub fn key_space(&self) -> u64 {
        self.base.pow(self.max_arity as u32)
    }

    pub fn encode(&self, edge: &Edge) -> u64 {
        debug_assert!(edge.arity() <= self.max_arity);
        edge.vertices().iter().rev().fold(0u64, |acc, &v| acc * self.base + u64::from(v))
    }

    pub fn decode(&self, key: u64) -> Result<Edge, SketchError> {
        let bad = || SketchError::BadKey { key, n: self.base };
        if key >= self.key_space() {
            return Err(bad());
        }
        let mut digits: Vec<VertexId> = Vec::with_capacity(self.max_arity);
        let mut rest = key;
        while rest > 0 {
            digits.push((rest % self.base) as VertexId);
            rest /= self.base;
        }
        if digits.is_empty() {
            digits.push(0);
        }
        if digits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad());
        }
        Edge::new(digits).map_err(|_| bad())
    }
}
