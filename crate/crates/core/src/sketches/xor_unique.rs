use super::{ensure_same, LinearSketch, SketchError};
use crate::hashing::keyed_hash;

/// Counter plus XOR of keys, recovering a key when it is the only one present.
///
/// Sound only for 0/1 multiplicities, which simple-graph streams guarantee.
/// The checksum XORs a keyed fingerprint of every key; at count 1 it must match
/// the fingerprint of the accumulated key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorUniqueSketch {
    seed: u64,
    pub count: i64,
    pub xor_acc: u64,
    pub checksum: u64,
}

impl XorUniqueSketch {
    pub fn new(seed: u64) -> Self {
        XorUniqueSketch { seed, count: 0, xor_acc: 0, checksum: 0 }
    }

    pub(crate) fn from_state(seed: u64, count: i64, xor_acc: u64, checksum: u64) -> Self {
        XorUniqueSketch { seed, count, xor_acc, checksum }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn fingerprint(&self, key: u64) -> u64 {
        keyed_hash(self.seed, key)
    }

    /// `Ok(Some(key))` when exactly one key is present, `Ok(None)` otherwise,
    /// and `Err(Corrupted)` if the count says one key but the checksum disagrees.
    pub fn query_unique(&self) -> Result<Option<u64>, SketchError> {
        if self.count != 1 {
            return Ok(None);
        }
        if self.fingerprint(self.xor_acc) == self.checksum {
            Ok(Some(self.xor_acc))
        } else {
            Err(SketchError::Corrupted)
        }
    }
}

impl LinearSketch for XorUniqueSketch {
    fn update(&mut self, key: u64, delta: i64) {
        self.count += delta;
        if delta & 1 != 0 {
            self.xor_acc ^= key;
            self.checksum ^= self.fingerprint(key);
        }
    }

    fn merge_from(&mut self, other: &Self) -> Result<(), SketchError> {
        ensure_same("xor seed", &self.seed, &other.seed)?;
        self.count += other.count;
        self.xor_acc ^= other.xor_acc;
        self.checksum ^= other.checksum;
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.count == 0 && self.xor_acc == 0 && self.checksum == 0
    }
}
