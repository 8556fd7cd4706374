use super::field::FingerprintField;
use super::sparse_recovery::{rows_for, SparseDecode, SparseRecovery};
use super::{ensure_same, LinearSketch, SketchError};
use crate::hashing::{derive_seed, keyed_hash};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L0Query {
    Empty,
    Fail,
    Key(u64),
}

/// ℓ0-sampler built from level hashing and per-level sparse recovery.
///
/// Each key gets a 64-bit rank. Level ℓ holds the keys whose rank has at least
/// ℓ leading zeros, so levels shrink geometrically and every nonempty level
/// contains the key of minimum rank. A query decodes the shallowest level that
/// decodes completely and returns its minimum-rank key, which is the global
/// minimum and hence uniform over the support.
#[derive(Clone, Debug, PartialEq)]
pub struct L0Sampler {
    seed: u64,
    delta: f64,
    rank_seed: u64,
    levels: Vec<SparseRecovery>,
    field: FingerprintField,
}

/// Per-level sparsity ⌈4·log₂(1/δ)⌉.
pub(crate) fn level_sparsity(delta: f64) -> usize {
    ((4.0 * (1.0 / delta).log2()).ceil() as usize).max(1)
}

impl L0Sampler {
    /// Sampler over keys in `[0, key_space)` failing with probability about `delta`.
    pub fn new(key_space: u64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(SketchError::Invalid(format!("delta {delta} outside (0,1)")));
        }
        let bits = 64 - key_space.max(1).leading_zeros() as usize;
        let n_levels = bits + 1;
        let sparsity = level_sparsity(delta);
        let rows = rows_for(delta);
        let field = FingerprintField::from_seed(derive_seed(seed, &[0xf1e1d]));
        let levels = (0..n_levels)
            .map(|l| SparseRecovery::with_field(sparsity, rows, derive_seed(seed, &[0x1e7e1, l as u64]), field))
            .collect();
        Ok(L0Sampler { seed, delta, rank_seed: derive_seed(seed, &[0x7a4c]), levels, field })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub(crate) fn levels(&self) -> &[SparseRecovery] {
        &self.levels
    }

    pub(crate) fn levels_mut(&mut self) -> &mut [SparseRecovery] {
        &mut self.levels
    }

    /// Nonzero buckets across all levels.
    pub fn occupied(&self) -> usize {
        self.levels.iter().map(SparseRecovery::occupied).sum()
    }

    fn rank(&self, key: u64) -> u64 {
        keyed_hash(self.rank_seed, key)
    }

    fn top_level(&self, key: u64) -> usize {
        (self.rank(key).leading_zeros() as usize).min(self.levels.len() - 1)
    }

    pub fn net_count(&self) -> i64 {
        self.levels[0].net_count()
    }

    pub fn query(&self) -> L0Query {
        for (l, level) in self.levels.iter().enumerate() {
            match level.decode() {
                SparseDecode::Fail => continue,
                SparseDecode::Decoded { items, .. } => {
                    let best = items
                        .iter()
                        .filter(|&&(_, m)| m != 0)
                        .min_by_key(|&&(k, _)| (self.rank(k), k))
                        .map(|&(k, _)| k);
                    return match best {
                        Some(k) => L0Query::Key(k),
                        // an empty level below failed levels means decoding lost keys
                        None if l == 0 => L0Query::Empty,
                        None => L0Query::Fail,
                    };
                }
            }
        }
        L0Query::Fail
    }
}

impl LinearSketch for L0Sampler {
    fn update(&mut self, key: u64, delta: i64) {
        let zp = self.field.power(key);
        let top = self.top_level(key);
        for level in &mut self.levels[..=top] {
            level.update_with_power(key, delta, zp);
        }
    }

    fn merge_from(&mut self, other: &Self) -> Result<(), SketchError> {
        ensure_same("l0 seed", &self.seed, &other.seed)?;
        ensure_same("l0 delta", &self.delta.to_bits(), &other.delta.to_bits())?;
        ensure_same("l0 levels", &self.levels.len(), &other.levels.len())?;
        for (mine, theirs) in self.levels.iter_mut().zip(&other.levels) {
            mine.merge_from(theirs)?;
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.levels.iter().all(SparseRecovery::is_zero)
    }
}
