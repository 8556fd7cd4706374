use super::field::{self, FingerprintField};

/// Outcome of probing a [`OneSparseRecoverer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneSparse {
    Zero,
    One { key: u64, multiplicity: i64 },
    Many,
}

/// `(Σδ, Σδ·key, Σδ·z^key mod q)` over the keys routed to it.
///
/// The fingerprint base `z` is shared by a bank of recoverers and passed in,
/// so one `z^key` evaluation serves every row an update touches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OneSparseRecoverer {
    pub c0: i64,
    pub c1: i128,
    pub fp: u64,
}

impl OneSparseRecoverer {
    /// `z_pow_key` must be `z^key` for the bank's field.
    #[inline]
    pub fn update(&mut self, key: u64, delta: i64, z_pow_key: u64) {
        self.c0 += delta;
        self.c1 += i128::from(delta) * i128::from(key);
        self.fp = field::add(self.fp, field::mul(field::from_i64(delta), z_pow_key));
    }

    #[inline]
    pub fn add(&mut self, other: &Self) {
        self.c0 += other.c0;
        self.c1 += other.c1;
        self.fp = field::add(self.fp, other.fp);
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0 && self.fp == 0
    }

    pub fn probe(&self, field: &FingerprintField) -> OneSparse {
        if self.is_zero() {
            return OneSparse::Zero;
        }
        if self.c0 == 0 || self.c1 % i128::from(self.c0) != 0 {
            return OneSparse::Many;
        }
        let key = self.c1 / i128::from(self.c0);
        if key < 0 || key > i128::from(i64::MAX) {
            return OneSparse::Many;
        }
        let key = key as u64;
        let expect = field::mul(field::from_i64(self.c0), field.power(key));
        if expect == self.fp {
            OneSparse::One { key, multiplicity: self.c0 }
        } else {
            OneSparse::Many
        }
    }
}
