use crate::hashing::keyed_hash;

/// 2^61 − 1, a Mersenne prime.
pub const FIELD_PRIME: u64 = (1 << 61) - 1;

#[inline]
fn reduce(x: u128) -> u64 {
    let lo = (x as u64) & FIELD_PRIME;
    let hi = (x >> 61) as u64;
    let mut r = lo + (hi & FIELD_PRIME) + ((x >> 122) as u64);
    while r >= FIELD_PRIME {
        r -= FIELD_PRIME;
    }
    r
}

#[inline]
pub(crate) fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

#[inline]
pub(crate) fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= FIELD_PRIME {
        s - FIELD_PRIME
    } else {
        s
    }
}

#[inline]
pub(crate) fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        FIELD_PRIME - a
    }
}

/// Maps a signed integer into the field.
#[inline]
pub(crate) fn from_i64(x: i64) -> u64 {
    let m = (x.unsigned_abs()) % FIELD_PRIME;
    if x < 0 {
        neg(m)
    } else {
        m
    }
}

/// Polynomial fingerprint `key ↦ z^key` over GF(2^61 − 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerprintField {
    z: u64,
}

impl FingerprintField {
    pub fn from_seed(seed: u64) -> Self {
        // z in [2, p-1)
        let z = 2 + keyed_hash(seed, 0x7a) % (FIELD_PRIME - 3);
        FingerprintField { z }
    }

    pub fn base(&self) -> u64 {
        self.z
    }

    /// z^key; the exponent is reduced mod p−1 by Fermat.
    pub fn power(&self, key: u64) -> u64 {
        let mut exp = key % (FIELD_PRIME - 1);
        let mut base = self.z;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }
}
