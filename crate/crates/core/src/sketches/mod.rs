//! Linear sketches over keyed ±1 update streams.
//!
//! Every sketch here is a linear function of the update vector, so sketches of
//! two streams built with the same seed and parameters merge into the sketch of
//! the concatenated stream. State is stored canonically (zero entries are never
//! kept), which makes merged and single-pass sketches equal bit for bit.

mod counter;
mod field;
mod key;
mod l0;
mod one_sparse;
mod sparse_recovery;
mod xor_unique;

pub use counter::CounterSketch;
pub use field::{FingerprintField, FIELD_PRIME};
pub use key::KeyCodec;
pub use l0::{L0Query, L0Sampler};
pub use one_sparse::{OneSparse, OneSparseRecoverer};
pub use sparse_recovery::{SparseDecode, SparseRecovery};
pub use xor_unique::XorUniqueSketch;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SketchError {
    #[error("cannot merge sketches: {0}")]
    Mismatch(String),
    #[error("sketch state failed its checksum")]
    Corrupted,
    #[error("invalid sketch parameter: {0}")]
    Invalid(String),
    #[error("key {key} does not decode to an edge over {n} vertices")]
    BadKey { key: u64, n: u64 },
}

/// Common surface of the linear sketches.
pub trait LinearSketch {
    /// Applies `delta` (±1) to the coordinate `key`.
    fn update(&mut self, key: u64, delta: i64);

    /// Adds `other` into `self`. Both must share seeds and parameters.
    fn merge_from(&mut self, other: &Self) -> Result<(), SketchError>;

    /// True when the state equals a freshly initialized sketch.
    fn is_zero(&self) -> bool;
}

/// Merges two sketches, consuming both.
pub fn merge<S: LinearSketch>(mut a: S, b: S) -> Result<S, SketchError> {
    a.merge_from(&b)?;
    Ok(a)
}

pub(crate) fn ensure_same<T: PartialEq + std::fmt::Debug>(what: &str, a: &T, b: &T) -> Result<(), SketchError> {
    if a == b {
        Ok(())
    } else {
        Err(SketchError::Mismatch(format!("{what} differs ({a:?} vs {b:?})")))
    }
}
