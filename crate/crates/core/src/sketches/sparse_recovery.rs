use std::collections::BTreeMap;

use super::field::FingerprintField;
use super::one_sparse::{OneSparse, OneSparseRecoverer};
use super::{ensure_same, LinearSketch, SketchError};
use crate::hashing::{derive_seed, keyed_hash};

/// Result of decoding a [`SparseRecovery`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparseDecode {
    /// Peeling did not empty the sketch.
    Fail,
    /// The full support. `overflow` is set when it is larger than the budget.
    Decoded { items: Vec<(u64, i64)>, overflow: bool },
}

impl SparseDecode {
    pub fn items(&self) -> Option<&[(u64, i64)]> {
        match self {
            SparseDecode::Decoded { items, .. } => Some(items),
            SparseDecode::Fail => None,
        }
    }
}

/// s-sparse recovery: `rows` independent hashings of keys into `2s` buckets of
/// 1-sparse recoverers, decoded by peeling.
///
/// Buckets are stored sparsely; a bucket whose state returns to zero is dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRecovery {
    sparsity: usize,
    rows: usize,
    seed: u64,
    field: FingerprintField,
    cells: BTreeMap<(u32, u32), OneSparseRecoverer>,
}

/// Rows needed for failure probability `delta`: ⌈log₂(1/δ)⌉, at least 1.
pub(crate) fn rows_for(delta: f64) -> usize {
    ((1.0 / delta).log2().ceil() as usize).max(1)
}

impl SparseRecovery {
    /// Exact recovery of supports up to `sparsity` keys with probability ≥ 1−δ.
    pub fn new(sparsity: usize, delta: f64, seed: u64) -> Result<Self, SketchError> {
        if sparsity == 0 {
            return Err(SketchError::Invalid("sparsity must be positive".into()));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(SketchError::Invalid(format!("delta {delta} outside (0,1)")));
        }
        Ok(Self::with_field(sparsity, rows_for(delta), seed, FingerprintField::from_seed(seed)))
    }

    pub(crate) fn with_field(sparsity: usize, rows: usize, seed: u64, field: FingerprintField) -> Self {
        SparseRecovery { sparsity, rows, seed, field, cells: BTreeMap::new() }
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn buckets_per_row(&self) -> usize {
        2 * self.sparsity
    }

    /// Nonzero buckets currently stored.
    pub fn occupied(&self) -> usize {
        self.cells.len()
    }

    pub(crate) fn cells(&self) -> &BTreeMap<(u32, u32), OneSparseRecoverer> {
        &self.cells
    }

    pub(crate) fn insert_cell(&mut self, at: (u32, u32), cell: OneSparseRecoverer) {
        if !cell.is_zero() {
            self.cells.insert(at, cell);
        }
    }

    #[inline]
    fn bucket(&self, row: usize, key: u64) -> u32 {
        let row_seed = derive_seed(self.seed, &[row as u64]);
        (keyed_hash(row_seed, key) % self.buckets_per_row() as u64) as u32
    }

    /// Update with a precomputed `z^key`.
    pub(crate) fn update_with_power(&mut self, key: u64, delta: i64, z_pow_key: u64) {
        for row in 0..self.rows {
            let at = (row as u32, self.bucket(row, key));
            let cell = self.cells.entry(at).or_default();
            cell.update(key, delta, z_pow_key);
            if cell.is_zero() {
                self.cells.remove(&at);
            }
        }
    }

    /// Σ of multiplicities over the support.
    pub fn net_count(&self) -> i64 {
        self.cells.range((0, 0)..(1, 0)).map(|(_, c)| c.c0).sum()
    }

    pub fn decode(&self) -> SparseDecode {
        let mut work = self.cells.clone();
        let mut items: Vec<(u64, i64)> = Vec::new();
        // peel pure buckets; only buckets touched by a peel need probing again
        let mut queue: Vec<(u32, u32)> = work.keys().copied().collect();
        while let Some(at) = queue.pop() {
            let Some(cell) = work.get(&at) else { continue };
            let (key, multiplicity) = match cell.probe(&self.field) {
                OneSparse::One { key, multiplicity } if self.bucket(at.0 as usize, key) == at.1 => (key, multiplicity),
                _ => continue,
            };
            let zp = self.field.power(key);
            for row in 0..self.rows {
                let at = (row as u32, self.bucket(row, key));
                let cell = work.entry(at).or_default();
                cell.update(key, -multiplicity, zp);
                if cell.is_zero() {
                    work.remove(&at);
                } else {
                    queue.push(at);
                }
            }
            items.push((key, multiplicity));
        }
        if !work.is_empty() {
            return SparseDecode::Fail;
        }
        items.sort_unstable();
        let overflow = items.len() > self.sparsity;
        SparseDecode::Decoded { items, overflow }
    }
}

impl LinearSketch for SparseRecovery {
    fn update(&mut self, key: u64, delta: i64) {
        let zp = self.field.power(key);
        self.update_with_power(key, delta, zp);
    }

    fn merge_from(&mut self, other: &Self) -> Result<(), SketchError> {
        ensure_same("sparsity", &self.sparsity, &other.sparsity)?;
        ensure_same("rows", &self.rows, &other.rows)?;
        ensure_same("seed", &self.seed, &other.seed)?;
        ensure_same("field", &self.field, &other.field)?;
        for (&at, cell) in &other.cells {
            let mine = self.cells.entry(at).or_default();
            mine.add(cell);
            if mine.is_zero() {
                self.cells.remove(&at);
            }
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_small_support() {
        let mut s = SparseRecovery::new(10, 0.01, 4).unwrap();
        s.update(17, 1);
        s.update(99, 1);
        assert_eq!(s.decode(), SparseDecode::Decoded { items: vec![(17, 1), (99, 1)], overflow: false });
        assert_eq!(s.net_count(), 2);
    }

    #[test]
    fn empty_support_decodes_empty() {
        let s = SparseRecovery::new(3, 0.01, 4).unwrap();
        assert_eq!(s.decode(), SparseDecode::Decoded { items: vec![], overflow: false });
    }

    #[test]
    fn overfull_support_fails_or_flags() {
        let mut s = SparseRecovery::new(4, 0.01, 8).unwrap();
        for k in 0..9 {
            s.update(1000 + k, 1);
        }
        match s.decode() {
            SparseDecode::Fail => {}
            SparseDecode::Decoded { overflow, .. } => assert!(overflow),
        }
    }

    #[test]
    fn deletes_cancel() {
        let mut s = SparseRecovery::new(4, 0.01, 8).unwrap();
        s.update(5, 1);
        s.update(6, 1);
        s.update(5, -1);
        s.update(6, -1);
        assert!(s.is_zero());
    }

    #[test]
    fn merge_checks_parameters() {
        let a = SparseRecovery::new(4, 0.01, 8).unwrap();
        let b = SparseRecovery::new(4, 0.01, 9).unwrap();
        assert!(super::super::merge(a, b).is_err());
    }
}
