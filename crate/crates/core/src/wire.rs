//! Versioned binary encoding of hash functions, sketches and stream states.
//!
//! ```text
//! magic "SGSW" | version u16 | type tag u8 | body | checksum u64
//! ```
//!
//! All integers are little endian and floats are stored as their IEEE bits, so
//! decoding reproduces the encoded value exactly. The checksum is FNV-1a over
//! every preceding byte. Decoding re-derives whatever the seeds determine and
//! rejects state that disagrees with it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algorithms::{AlgoParams, ArboricityState, Mode, StreamState};
use crate::hashing::{ColorSet, HashFn};
use crate::sample::{CellId, CellMode, CellSketch, SampleConfig, SampleSketch};
use crate::sketches::{
    CounterSketch, FingerprintField, L0Sampler, OneSparseRecoverer, SparseRecovery, XorUniqueSketch, FIELD_PRIME,
};
use crate::solvers::PropertySpec;
use crate::types::Weight;

pub const MAGIC: [u8; 4] = *b"SGSW";
pub const VERSION: u16 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WireError {
    #[error("not a sketch file (bad magic)")]
    Magic,
    #[error("unsupported format version {0}")]
    Version(u16),
    #[error("expected a {expected} record, found type tag {found}")]
    Type { expected: &'static str, found: u8 },
    #[error("input ends early")]
    Truncated,
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("checksum mismatch")]
    Checksum,
    #[error("invalid state: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, WireError> {
    Err(WireError::Invalid(msg.into()))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Byte sink used by [`Wire::encode_body`].
#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u8(&mut self, x: u8) {
        self.buf.push(x);
    }
    fn u32(&mut self, x: u32) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn i64(&mut self, x: i64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn i128(&mut self, x: i128) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn f64(&mut self, x: f64) {
        self.u64(x.to_bits());
    }
    fn usize(&mut self, x: usize) {
        self.u64(x as u64);
    }
}

/// Byte source used by [`Wire::decode_body`].
pub struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        let end = self.pos.checked_add(N).ok_or(WireError::Truncated)?;
        let s = self.bytes.get(self.pos..end).ok_or(WireError::Truncated)?;
        self.pos = end;
        Ok(s.try_into().expect("slice of length N"))
    }
    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    fn i64(&mut self) -> Result<i64, WireError> {
        Ok(i64::from_le_bytes(self.take()?))
    }
    fn i128(&mut self) -> Result<i128, WireError> {
        Ok(i128::from_le_bytes(self.take()?))
    }
    fn f64(&mut self) -> Result<f64, WireError> {
        Ok(f64::from_bits(self.u64()?))
    }
    fn usize(&mut self) -> Result<usize, WireError> {
        usize::try_from(self.u64()?).map_err(|_| WireError::Invalid("length overflows usize".into()))
    }
    /// A count of items each at least `min_size` bytes long; bounded by the
    /// remaining input so corrupt lengths cannot trigger huge allocations.
    fn count(&mut self, min_size: usize) -> Result<usize, WireError> {
        let n = self.usize()?;
        if n.saturating_mul(min_size.max(1)) > self.bytes.len() - self.pos {
            return Err(WireError::Truncated);
        }
        Ok(n)
    }
    fn bool(&mut self) -> Result<bool, WireError> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => invalid(format!("bad boolean byte {b}")),
        }
    }
}

/// Types with a wire encoding.
pub trait Wire: Sized {
    const TAG: u8;
    const NAME: &'static str;
    fn encode_body(&self, w: &mut Writer);
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError>;
}

pub fn to_bytes<T: Wire>(value: &T) -> Vec<u8> {
    let mut w = Writer::default();
    w.buf.extend_from_slice(&MAGIC);
    w.buf.extend_from_slice(&VERSION.to_le_bytes());
    w.u8(T::TAG);
    value.encode_body(&mut w);
    let sum = fnv1a(&w.buf);
    w.u64(sum);
    w.buf
}

/// Reads the type tag after validating magic, version and checksum.
pub fn peek_tag(bytes: &[u8]) -> Result<u8, WireError> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        return Err(WireError::Magic);
    }
    if bytes.len() < 4 + 2 + 1 + 8 {
        return Err(WireError::Truncated);
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(WireError::Version(version));
    }
    let (body, sum) = bytes.split_at(bytes.len() - 8);
    if fnv1a(body) != u64::from_le_bytes(sum.try_into().expect("8 bytes")) {
        return Err(WireError::Checksum);
    }
    Ok(bytes[6])
}

pub fn from_bytes<T: Wire>(bytes: &[u8]) -> Result<T, WireError> {
    let tag = peek_tag(bytes)?;
    if tag != T::TAG {
        return Err(WireError::Type { expected: T::NAME, found: tag });
    }
    let body = &bytes[..bytes.len() - 8];
    let mut r = Reader { bytes: body, pos: 7 };
    let value = T::decode_body(&mut r)?;
    if r.pos != body.len() {
        return Err(WireError::Trailing(body.len() - r.pos));
    }
    Ok(value)
}

impl Wire for HashFn {
    const TAG: u8 = 1;
    const NAME: &'static str = "hash function";
    fn encode_body(&self, w: &mut Writer) {
        w.u64(self.prime());
        w.u32(self.range());
        w.u64(self.domain());
        w.usize(self.coefficients().len());
        for &c in self.coefficients() {
            w.u64(c);
        }
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        let prime = r.u64()?;
        let range = r.u32()?;
        let domain = r.u64()?;
        let t = r.count(8)?;
        let coefficients = (0..t).map(|_| r.u64()).collect::<Result<Vec<_>, _>>()?;
        HashFn::from_parts(prime, coefficients, range, domain).map_err(|e| WireError::Invalid(e.to_string()))
    }
}

impl Wire for CounterSketch {
    const TAG: u8 = 2;
    const NAME: &'static str = "counter sketch";
    fn encode_body(&self, w: &mut Writer) {
        w.i64(self.count);
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        Ok(CounterSketch { count: r.i64()? })
    }
}

impl Wire for XorUniqueSketch {
    const TAG: u8 = 3;
    const NAME: &'static str = "xor sketch";
    fn encode_body(&self, w: &mut Writer) {
        w.u64(self.seed());
        w.i64(self.count);
        w.u64(self.xor_acc);
        w.u64(self.checksum);
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        Ok(XorUniqueSketch::from_state(r.u64()?, r.i64()?, r.u64()?, r.u64()?))
    }
}

fn encode_buckets(s: &SparseRecovery, w: &mut Writer) {
    w.usize(s.sparsity());
    w.usize(s.rows());
    w.u64(s.seed());
    w.usize(s.cells().len());
    for (&(row, bucket), c) in s.cells() {
        w.u32(row);
        w.u32(bucket);
        w.i64(c.c0);
        w.i128(c.c1);
        w.u64(c.fp);
    }
}

/// Reads buckets into `into`, whose sparsity, rows and seed must match.
fn decode_buckets(r: &mut Reader<'_>, into: &mut SparseRecovery) -> Result<(), WireError> {
    let (sparsity, rows, seed) = (r.usize()?, r.usize()?, r.u64()?);
    if (sparsity, rows, seed) != (into.sparsity(), into.rows(), into.seed()) {
        return invalid("sparse recovery parameters do not match their seed");
    }
    let n = r.count(40)?;
    let mut last: Option<(u32, u32)> = None;
    for _ in 0..n {
        let at = (r.u32()?, r.u32()?);
        let cell = OneSparseRecoverer { c0: r.i64()?, c1: r.i128()?, fp: r.u64()? };
        if last.is_some_and(|l| l >= at) {
            return invalid("buckets out of order");
        }
        last = Some(at);
        if at.0 as usize >= rows || at.1 as usize >= into.buckets_per_row() {
            return invalid(format!("bucket {at:?} outside the table"));
        }
        if cell.is_zero() || cell.fp >= FIELD_PRIME {
            return invalid("zero or unreduced bucket");
        }
        into.insert_cell(at, cell);
    }
    Ok(())
}

impl Wire for SparseRecovery {
    const TAG: u8 = 4;
    const NAME: &'static str = "sparse recovery sketch";
    fn encode_body(&self, w: &mut Writer) {
        encode_buckets(self, w);
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        let start = r.pos;
        let (sparsity, rows, seed) = (r.usize()?, r.usize()?, r.u64()?);
        if sparsity == 0 || rows == 0 || rows > 64 {
            return invalid("sparsity and rows must be positive");
        }
        r.pos = start;
        let mut s = SparseRecovery::with_field(sparsity, rows, seed, FingerprintField::from_seed(seed));
        decode_buckets(r, &mut s)?;
        Ok(s)
    }
}

fn encode_l0(s: &L0Sampler, w: &mut Writer) {
    w.u64(s.seed());
    w.f64(s.delta());
    w.usize(s.num_levels());
    for level in s.levels() {
        encode_buckets(level, w);
    }
}

fn decode_l0(r: &mut Reader<'_>) -> Result<L0Sampler, WireError> {
    let seed = r.u64()?;
    let delta = r.f64()?;
    let levels = r.usize()?;
    if !(2..=65).contains(&levels) {
        return invalid(format!("{levels} levels"));
    }
    // a key space of 2^(L-2) yields exactly L levels
    let mut s = L0Sampler::new(1u64 << (levels - 2), delta, seed).map_err(|e| WireError::Invalid(e.to_string()))?;
    for level in s.levels_mut() {
        decode_buckets(r, level)?;
    }
    Ok(s)
}

impl Wire for L0Sampler {
    const TAG: u8 = 5;
    const NAME: &'static str = "l0 sampler";
    fn encode_body(&self, w: &mut Writer) {
        encode_l0(self, w);
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        decode_l0(r)
    }
}

fn encode_config(c: &SampleConfig, w: &mut Writer) {
    w.u32(c.colors);
    w.usize(c.max_color_set);
    w.u32(c.repetitions);
    w.usize(c.independence);
    w.u8(c.cell_mode.tag());
    w.u64(c.seed);
    w.u64(c.vertex_bound);
    w.usize(c.max_arity);
    w.f64(c.delta);
}

fn decode_config(r: &mut Reader<'_>) -> Result<SampleConfig, WireError> {
    let colors = r.u32()?;
    let max_color_set = r.usize()?;
    let repetitions = r.u32()?;
    let independence = r.usize()?;
    let tag = r.u8()?;
    let cell_mode = CellMode::from_tag(tag).ok_or_else(|| WireError::Invalid(format!("cell mode tag {tag}")))?;
    Ok(SampleConfig {
        colors,
        max_color_set,
        repetitions,
        independence,
        cell_mode,
        seed: r.u64()?,
        vertex_bound: r.u64()?,
        max_arity: r.usize()?,
        delta: r.f64()?,
    })
}

fn encode_cell(c: &CellSketch, w: &mut Writer) {
    match c {
        CellSketch::Counter(s) => {
            w.u8(0);
            w.i64(s.count);
        }
        CellSketch::Xor(s) => {
            w.u8(1);
            s.encode_body(w);
        }
        CellSketch::L0(s) => {
            w.u8(2);
            encode_l0(s, w);
        }
    }
}

fn decode_cell(r: &mut Reader<'_>) -> Result<CellSketch, WireError> {
    Ok(match r.u8()? {
        0 => CellSketch::Counter(CounterSketch { count: r.i64()? }),
        1 => CellSketch::Xor(XorUniqueSketch::decode_body(r)?),
        2 => CellSketch::L0(decode_l0(r)?),
        t => return invalid(format!("cell tag {t}")),
    })
}

/// Kind and seeds agree with the cell a fresh sketch would allocate.
fn same_shape(a: &CellSketch, b: &CellSketch) -> bool {
    match (a, b) {
        (CellSketch::Counter(_), CellSketch::Counter(_)) => true,
        (CellSketch::Xor(x), CellSketch::Xor(y)) => x.seed() == y.seed(),
        (CellSketch::L0(x), CellSketch::L0(y)) => {
            x.seed() == y.seed() && x.delta().to_bits() == y.delta().to_bits() && x.num_levels() == y.num_levels()
        }
        _ => false,
    }
}

fn encode_sample(s: &SampleSketch, w: &mut Writer) {
    encode_config(s.config(), w);
    for h in s.hashes() {
        h.encode_body(w);
    }
    w.usize(s.cells().len());
    for (id, cell) in s.cells() {
        w.u32(id.repetition);
        w.f64(id.weight.get());
        w.usize(id.colors.len());
        for &c in id.colors.colors() {
            w.u32(c);
        }
        encode_cell(cell, w);
    }
}

fn decode_sample(r: &mut Reader<'_>) -> Result<SampleSketch, WireError> {
    let config = decode_config(r)?;
    config.validate().map_err(|e| WireError::Invalid(e.to_string()))?;
    if config.repetitions as usize > r.bytes.len() {
        return Err(WireError::Truncated);
    }
    let hashes = (0..config.repetitions).map(|_| HashFn::decode_body(r)).collect::<Result<Vec<_>, _>>()?;
    let empty = SampleSketch::from_parts(config.clone(), hashes.clone(), BTreeMap::new())
        .map_err(|e| WireError::Invalid(e.to_string()))?;
    let n = r.count(21)?;
    let mut cells = BTreeMap::new();
    for _ in 0..n {
        let repetition = r.u32()?;
        let weight = Weight::new(r.f64()?).map_err(|e| WireError::Invalid(e.to_string()))?;
        let len = r.count(4)?;
        let colors = (0..len).map(|_| r.u32()).collect::<Result<_, _>>()?;
        let id = CellId { repetition, weight, colors: ColorSet(colors) };
        let sorted = id.colors.0.windows(2).all(|p| p[0] < p[1]);
        if repetition >= config.repetitions
            || id.colors.is_empty()
            || id.colors.len() > config.max_color_set
            || !sorted
            || id.colors.0.iter().any(|&c| c >= config.colors)
        {
            return invalid(format!("cell address {id:?} outside the sketch"));
        }
        let cell = decode_cell(r)?;
        let fresh = empty.new_cell(&id).map_err(|e| WireError::Invalid(e.to_string()))?;
        if !same_shape(&cell, &fresh) {
            return invalid(format!("cell {id:?} does not match its seed"));
        }
        if cells.insert(id, cell).is_some() {
            return invalid("duplicate cell");
        }
    }
    SampleSketch::from_parts(config, hashes, cells).map_err(|e| WireError::Invalid(e.to_string()))
}

impl Wire for SampleSketch {
    const TAG: u8 = 6;
    const NAME: &'static str = "sample sketch";
    fn encode_body(&self, w: &mut Writer) {
        encode_sample(self, w);
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        decode_sample(r)
    }
}

fn encode_opt_f64(x: Option<f64>, w: &mut Writer) {
    match x {
        Some(v) => {
            w.u8(1);
            w.f64(v);
        }
        None => w.u8(0),
    }
}

fn decode_opt_f64(r: &mut Reader<'_>) -> Result<Option<f64>, WireError> {
    Ok(if r.bool()? { Some(r.f64()?) } else { None })
}

fn encode_params(p: &AlgoParams, w: &mut Writer) {
    w.usize(p.k);
    w.f64(p.alpha);
    w.f64(p.eps);
    w.u32(p.nu);
    w.usize(p.d);
    w.f64(p.r_const);
    w.f64(p.b_const);
    w.usize(p.t_cap);
    w.u32(p.reps);
    w.u64(p.seed);
    w.f64(p.delta);
    w.u8(p.cell_mode.map_or(0xff, CellMode::tag));
    w.u8(u8::from(p.round));
    w.f64(p.w_max);
    encode_opt_f64(p.p_override, w);
    let (tag, arg) = match p.property {
        PropertySpec::BMatching(b) => (0, b),
        PropertySpec::MaxForest => (1, 0),
        PropertySpec::DisjointPaths => (2, 0),
        PropertySpec::KColorable(k) => (3, k),
    };
    w.u8(tag);
    w.u32(arg);
}

fn decode_params(r: &mut Reader<'_>) -> Result<AlgoParams, WireError> {
    let k = r.usize()?;
    let alpha = r.f64()?;
    let eps = r.f64()?;
    let nu = r.u32()?;
    let d = r.usize()?;
    let r_const = r.f64()?;
    let b_const = r.f64()?;
    let t_cap = r.usize()?;
    let reps = r.u32()?;
    let seed = r.u64()?;
    let delta = r.f64()?;
    let cell_mode = match r.u8()? {
        0xff => None,
        t => Some(CellMode::from_tag(t).ok_or_else(|| WireError::Invalid(format!("cell mode tag {t}")))?),
    };
    let round = r.bool()?;
    let w_max = r.f64()?;
    let p_override = decode_opt_f64(r)?;
    let property = match (r.u8()?, r.u32()?) {
        (0, b) => PropertySpec::BMatching(b),
        (1, _) => PropertySpec::MaxForest,
        (2, _) => PropertySpec::DisjointPaths,
        (3, k) => PropertySpec::KColorable(k),
        (t, _) => return invalid(format!("property tag {t}")),
    };
    Ok(AlgoParams {
        k,
        alpha,
        eps,
        nu,
        d,
        r_const,
        b_const,
        t_cap,
        reps,
        seed,
        delta,
        cell_mode,
        round,
        w_max,
        p_override,
        property,
    })
}

fn mode_tag(m: Mode) -> u8 {
    Mode::ALL.iter().position(|&x| x == m).expect("mode listed") as u8
}

impl Wire for StreamState {
    const TAG: u8 = 7;
    const NAME: &'static str = "stream state";
    fn encode_body(&self, w: &mut Writer) {
        w.u8(mode_tag(self.mode));
        w.u64(self.n);
        encode_params(&self.params, w);
        w.usize(self.samples.len());
        for s in &self.samples {
            encode_sample(s, w);
        }
        match &self.arboricity {
            None => w.u8(0),
            Some(a) => {
                w.u8(1);
                w.f64(a.p);
                w.u64(a.member_seed);
                w.usize(a.threshold);
                w.usize(a.degrees.len());
                for (&v, &d) in &a.degrees {
                    w.u32(v);
                    w.i64(d);
                }
                encode_buckets(&a.induced, w);
            }
        }
    }
    fn decode_body(r: &mut Reader<'_>) -> Result<Self, WireError> {
        let tag = r.u8()?;
        let mode = *Mode::ALL.get(tag as usize).ok_or_else(|| WireError::Invalid(format!("mode tag {tag}")))?;
        let n = r.u64()?;
        let params = decode_params(r)?;
        let count = r.count(1)?;
        let samples = (0..count).map(|_| decode_sample(r)).collect::<Result<Vec<_>, _>>()?;
        let arboricity = if r.bool()? {
            let mut a = ArboricityState::new(&params, n).map_err(|e| WireError::Invalid(e.to_string()))?;
            let (p, member_seed, threshold) = (r.f64()?, r.u64()?, r.usize()?);
            if p.to_bits() != a.p.to_bits() || member_seed != a.member_seed || threshold != a.threshold {
                return invalid("vertex sampling does not match the parameters");
            }
            let len = r.count(12)?;
            let mut last = None;
            for _ in 0..len {
                let (v, d) = (r.u32()?, r.i64()?);
                if d == 0 || last.is_some_and(|l| l >= v) || u64::from(v) >= n {
                    return invalid("bad degree entry");
                }
                last = Some(v);
                a.degrees.insert(v, d);
            }
            decode_buckets(r, &mut a.induced)?;
            Some(a)
        } else {
            None
        };
        StreamState::from_parts(mode, params, n, samples, arboricity).map_err(|e| WireError::Invalid(e.to_string()))
    }
}
