//! t-wise independent polynomial hash families over a prime field, plus the
//! seed-derivation helpers that make every sketch reproducible from one root seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::types::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HashError {
    #[error("independence must be at least 2, got {0}")]
    Independence(usize),
    #[error("range must be at least 1")]
    EmptyRange,
    #[error("domain must be at least 1")]
    EmptyDomain,
    #[error("input {x} is outside the hash domain [0, {domain})")]
    OutOfDomain { x: u64, domain: u64 },
    #[error("invalid hash parameters: {0}")]
    Invalid(String),
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed 64-bit hash of `x`.
#[inline]
pub fn keyed_hash(key: u64, x: u64) -> u64 {
    mix64(mix64(key) ^ x.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Derives a child seed from `seed` and a path of labels. Child seeds for
/// distinct paths are independent-looking; the same path always gives the
/// same child.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p.wrapping_add(0x632b_e59b_d9b4_e019))))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_above(x: u64) -> u64 {
    let mut c = x + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// A degree-(t−1) polynomial over GF(p), reduced into `[0, range)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashFn {
    prime: u64,
    coefficients: Vec<u64>,
    range: u32,
    domain: u64,
}

impl HashFn {
    /// Draws a function from the t-wise family on domain `[0, n)` with range `[0, b)`.
    /// The same arguments always produce the same function.
    pub fn new(seed: u64, t: usize, n: u64, b: u32) -> Result<Self, HashError> {
        if t < 2 {
            return Err(HashError::Independence(t));
        }
        if b == 0 {
            return Err(HashError::EmptyRange);
        }
        if n == 0 {
            return Err(HashError::EmptyDomain);
        }
        let prime = next_prime_above(n.max(u64::from(b)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coefficients = (0..t).map(|_| rng.gen_range(0..prime)).collect();
        Ok(HashFn { prime, coefficients, range: b, domain: n })
    }

    /// Builds a function from explicit parts; `coefficients[i]` multiplies `x^i`.
    pub fn from_parts(prime: u64, coefficients: Vec<u64>, range: u32, domain: u64) -> Result<Self, HashError> {
        if coefficients.len() < 2 {
            return Err(HashError::Independence(coefficients.len()));
        }
        if range == 0 {
            return Err(HashError::EmptyRange);
        }
        if domain == 0 {
            return Err(HashError::EmptyDomain);
        }
        if prime <= domain.saturating_sub(1) || prime <= u64::from(range) || !is_prime(prime) {
            return Err(HashError::Invalid(format!("{prime} is not a prime above the domain and range")));
        }
        if coefficients.iter().any(|&c| c >= prime) {
            return Err(HashError::Invalid("coefficient outside the field".into()));
        }
        Ok(HashFn { prime, coefficients, range, domain })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn range(&self) -> u32 {
        self.range
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn independence(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, x: u64) -> Result<u32, HashError> {
        if x >= self.domain {
            return Err(HashError::OutOfDomain { x, domain: self.domain });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Horner evaluation; the caller guarantees `x` is in the domain.
    #[inline]
    pub fn eval_unchecked(&self, x: u64) -> u32 {
        let p = self.prime;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coefficients.iter().rev() {
            acc = mul_mod(acc, x, p) + c;
            if acc >= p {
                acc -= p;
            }
        }
        (acc % u64::from(self.range)) as u32
    }

    /// Sorted, duplicate-free colors of `vertices`.
    pub fn color_set(&self, vertices: &[VertexId]) -> ColorSet {
        let mut colors: SmallVec<[u32; 4]> = vertices.iter().map(|&v| self.eval_unchecked(u64::from(v))).collect();
        colors.sort_unstable();
        colors.dedup();
        ColorSet(colors)
    }
}

/// The set of colors an edge's endpoints receive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorSet(pub SmallVec<[u32; 4]>);

impl ColorSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[u32] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(101) && is_prime((1 << 61) - 1));
        assert!(!is_prime(1) && !is_prime(561) && !is_prime(3_215_031_751));
        assert_eq!(next_prime_above(100), 101);
        assert_eq!(next_prime_above(101), 103);
        assert_eq!(next_prime_above(1), 2);
    }

    #[test]
    fn same_seed_same_function() {
        let a = HashFn::new(1, 2, 100, 10).unwrap();
        let b = HashFn::new(1, 2, 100, 10).unwrap();
        assert_eq!(a.coefficients(), b.coefficients());
        assert_eq!(a.prime(), 101);
    }

    #[test]
    fn different_seed_different_function() {
        let a = HashFn::new(1, 2, 100, 10).unwrap();
        let b = HashFn::new(2, 2, 100, 10).unwrap();
        assert_ne!(a.coefficients(), b.coefficients());
    }

    #[test]
    fn independence_sets_coefficient_count() {
        assert_eq!(HashFn::new(9, 5, 100, 10).unwrap().coefficients().len(), 5);
        assert_eq!(HashFn::new(9, 1, 100, 10), Err(HashError::Independence(1)));
    }

    #[test]
    fn explicit_polynomials() {
        let identity = HashFn::from_parts(101, vec![0, 1], 10, 100).unwrap();
        assert_eq!(identity.eval(23).unwrap(), 3);
        let constant = HashFn::from_parts(101, vec![5, 0], 3, 100).unwrap();
        for x in 0..100 {
            assert_eq!(constant.eval(x).unwrap(), 5 % 3);
        }
        assert_eq!(identity.eval(100), Err(HashError::OutOfDomain { x: 100, domain: 100 }));
    }

    #[test]
    fn color_sets_are_sets() {
        // coefficients [0,1] with range 10: color(x) = x mod 10
        let h = HashFn::from_parts(101, vec![0, 1], 10, 100).unwrap();
        assert_eq!(h.color_set(&[17, 27]).colors(), &[7]);
        assert_eq!(h.color_set(&[3, 19]).colors(), &[3, 9]);
        assert_eq!(h.color_set(&[12, 22, 35]).colors(), &[2, 5]);
    }

    #[test]
    fn serde_round_trip_preserves_outputs() {
        let h = HashFn::new(77, 4, 1000, 37).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        let back: HashFn = serde_json::from_str(&json).unwrap();
        assert!((0..1000).all(|x| h.eval(x) == back.eval(x)));
    }

    #[test]
    fn derived_seeds_differ_by_path() {
        assert_ne!(derive_seed(5, &[0]), derive_seed(5, &[1]));
        assert_ne!(derive_seed(5, &[0, 1]), derive_seed(5, &[1, 0]));
        assert_eq!(derive_seed(5, &[3, 4]), derive_seed(5, &[3, 4]));
    }
}
