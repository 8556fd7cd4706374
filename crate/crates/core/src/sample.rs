//! The subgraph sampling sketch.
//!
//! `r` independent colorings `c_j : [n] → [b]`. For every repetition `j`, weight
//! class `w` and color set `S` with `|S| ≤ d`, one cell sketch holds the edges of
//! weight `w` whose endpoint colors under `c_j` are exactly `S`. Recovering one
//! edge per cell gives the sampled subgraph.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hashing::{derive_seed, ColorSet, HashError, HashFn};
use crate::sketches::{
    CounterSketch, KeyCodec, L0Query, L0Sampler, LinearSketch, SketchError, XorUniqueSketch,
};
use crate::types::{Edge, EdgeError, EdgeUpdate, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("invalid sample configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error("counter cells cannot recover edges; use extract_contracted")]
    CounterMode,
    #[error("contracted extraction needs d = 2, got d = {0}")]
    NotPairwise(usize),
}

/// What each cell stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMode {
    /// Count only; enough for contracted graphs.
    Counter,
    /// Count and XOR of keys; recovers an edge when it is alone in its cell.
    XorUnique,
    /// Full ℓ0-sampler; recovers a uniform edge of the cell.
    L0,
}

impl std::str::FromStr for CellMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "counter" => Ok(CellMode::Counter),
            "xor_unique" | "xor-unique" | "xor" => Ok(CellMode::XorUnique),
            "l0" => Ok(CellMode::L0),
            other => Err(format!("unknown cell mode '{other}' (counter, xor_unique, l0)")),
        }
    }
}

impl CellMode {
    pub(crate) fn tag(self) -> u8 {
        match self {
            CellMode::Counter => 0,
            CellMode::XorUnique => 1,
            CellMode::L0 => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(CellMode::Counter),
            1 => Some(CellMode::XorUnique),
            2 => Some(CellMode::L0),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Number of colors `b`.
    pub colors: u32,
    /// Largest tracked color set `d`.
    pub max_color_set: usize,
    /// Independent colorings `r`.
    pub repetitions: u32,
    /// Hash independence `t`.
    pub independence: usize,
    pub cell_mode: CellMode,
    pub seed: u64,
    /// Vertex ids lie in `[0, vertex_bound)`.
    pub vertex_bound: u64,
    /// Largest hyperedge the stream may contain.
    pub max_arity: usize,
    /// Per-cell failure probability of ℓ0 cells.
    pub delta: f64,
}

impl SampleConfig {
    pub fn new(colors: u32, max_color_set: usize, repetitions: u32, vertex_bound: u64) -> Self {
        SampleConfig {
            colors,
            max_color_set,
            repetitions,
            independence: 2,
            cell_mode: CellMode::XorUnique,
            seed: 0,
            vertex_bound,
            max_arity: max_color_set.max(2),
            delta: 0.01,
        }
    }

    pub fn with_mode(mut self, mode: CellMode) -> Self {
        self.cell_mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_independence(mut self, t: usize) -> Self {
        self.independence = t;
        self
    }

    pub fn with_max_arity(mut self, arity: usize) -> Self {
        self.max_arity = arity;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        let fail = |m: String| Err(SampleError::Config(m));
        if self.colors == 0 {
            return fail("b must be at least 1".into());
        }
        if self.max_color_set == 0 || self.max_color_set > self.max_arity {
            return fail(format!("d = {} must lie in [1, max arity {}]", self.max_color_set, self.max_arity));
        }
        if self.repetitions == 0 {
            return fail("r must be at least 1".into());
        }
        if self.independence < 2 {
            return fail(format!("hash independence {} below 2", self.independence));
        }
        if self.vertex_bound == 0 {
            return fail("vertex bound must be positive".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail(format!("delta {} outside (0,1)", self.delta));
        }
        Ok(())
    }
}

/// Sketch behind one (repetition, weight, color set) cell.
#[derive(Clone, Debug, PartialEq)]
pub enum CellSketch {
    Counter(CounterSketch),
    Xor(XorUniqueSketch),
    L0(L0Sampler),
}

/// What a cell yields on extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellQuery {
    Empty,
    Key(u64),
    Fail,
    Corrupt,
}

impl CellSketch {
    fn update(&mut self, key: u64, delta: i64) {
        match self {
            CellSketch::Counter(s) => s.update(key, delta),
            CellSketch::Xor(s) => s.update(key, delta),
            CellSketch::L0(s) => s.update(key, delta),
        }
    }

    fn merge_from(&mut self, other: &CellSketch) -> Result<(), SketchError> {
        match (self, other) {
            (CellSketch::Counter(a), CellSketch::Counter(b)) => a.merge_from(b),
            (CellSketch::Xor(a), CellSketch::Xor(b)) => a.merge_from(b),
            (CellSketch::L0(a), CellSketch::L0(b)) => a.merge_from(b),
            _ => Err(SketchError::Mismatch("cell kinds differ".into())),
        }
    }

    /// Net number of live edges in the cell.
    pub fn net_count(&self) -> i64 {
        match self {
            CellSketch::Counter(s) => s.count,
            CellSketch::Xor(s) => s.count,
            CellSketch::L0(s) => s.net_count(),
        }
    }

    pub fn query(&self) -> CellQuery {
        match self {
            CellSketch::Counter(_) => CellQuery::Fail,
            CellSketch::Xor(s) => match s.query_unique() {
                Ok(Some(k)) => CellQuery::Key(k),
                Ok(None) => CellQuery::Empty,
                Err(_) => CellQuery::Corrupt,
            },
            CellSketch::L0(s) => match s.query() {
                L0Query::Key(k) => CellQuery::Key(k),
                L0Query::Empty => CellQuery::Empty,
                L0Query::Fail => CellQuery::Fail,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CellSketch::Counter(s) => s.is_zero(),
            CellSketch::Xor(s) => s.is_zero(),
            CellSketch::L0(s) => s.is_zero(),
        }
    }

    fn approx_bytes(&self) -> usize {
        match self {
            CellSketch::Counter(_) => 8,
            CellSketch::Xor(_) => 32,
            // (row, bucket) key plus (c0, c1, fp)
            CellSketch::L0(s) => 16 + s.occupied() * 40,
        }
    }
}

/// Address of a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub repetition: u32,
    pub weight: Weight,
    pub colors: ColorSet,
}

/// An edge recovered from a cell, with the cell it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledEdge {
    pub edge: Edge,
    pub weight: Weight,
    pub repetition: u32,
    pub colors: ColorSet,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampledSubgraph {
    pub vertex_bound: u64,
    pub edges: Vec<SampledEdge>,
    /// Cells whose checksum failed; treated as holding no edge.
    pub corrupt_cells: usize,
    /// Cells whose sampler failed; treated as holding no edge.
    pub failed_cells: usize,
}

impl SampledSubgraph {
    /// Distinct recovered edges with their weights, in canonical order.
    pub fn distinct_edges(&self) -> Vec<(Edge, f64)> {
        let set: BTreeMap<&Edge, Weight> = self.edges.iter().map(|e| (&e.edge, e.weight)).collect();
        set.into_iter().map(|(e, w)| (e.clone(), w.get())).collect()
    }

    pub fn repetition(&self, rep: u32) -> impl Iterator<Item = &SampledEdge> {
        self.edges.iter().filter(move |e| e.repetition == rep)
    }
}

/// The graph obtained by contracting every color class of one repetition to a
/// single vertex. Keys are color sets of size 1 (intra-class edges) or 2.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ContractedGraph {
    pub repetition: u32,
    pub colors: u32,
    pub edges: BTreeMap<ColorSet, i64>,
}

impl ContractedGraph {
    /// Contracted edges between distinct classes.
    pub fn proper_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.keys().filter(|s| s.len() == 2).map(|s| (s.0[0], s.0[1]))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub cells: usize,
    pub bytes: usize,
    pub per_repetition: Vec<usize>,
}

impl SpaceReport {
    pub fn absorb(&mut self, other: &SpaceReport) {
        self.cells += other.cells;
        self.bytes += other.bytes;
        if self.per_repetition.len() < other.per_repetition.len() {
            self.per_repetition.resize(other.per_repetition.len(), 0);
        }
        for (a, b) in self.per_repetition.iter_mut().zip(&other.per_repetition) {
            *a += b;
        }
    }
}

fn fresh_cell(config: &SampleConfig, codec: &KeyCodec, id: &CellId) -> Result<CellSketch, SampleError> {
    let mut path = vec![0xce11, u64::from(id.repetition), id.weight.to_bits()];
    path.extend(id.colors.0.iter().map(|&c| u64::from(c)));
    let seed = derive_seed(config.seed, &path);
    Ok(match config.cell_mode {
        CellMode::Counter => CellSketch::Counter(CounterSketch::new()),
        CellMode::XorUnique => CellSketch::Xor(XorUniqueSketch::new(seed)),
        CellMode::L0 => CellSketch::L0(L0Sampler::new(codec.key_space(), config.delta, seed)?),
    })
}

/// Streaming state of the sampling distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSketch {
    config: SampleConfig,
    codec: KeyCodec,
    hashes: Vec<HashFn>,
    cells: BTreeMap<CellId, CellSketch>,
}

impl SampleSketch {
    pub fn new(config: SampleConfig) -> Result<Self, SampleError> {
        config.validate()?;
        let codec = KeyCodec::new(config.vertex_bound, config.max_arity)?;
        let hashes = (0..config.repetitions)
            .map(|j| {
                HashFn::new(
                    derive_seed(config.seed, &[0x4a5, u64::from(j)]),
                    config.independence,
                    config.vertex_bound,
                    config.colors,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SampleSketch { config, codec, hashes, cells: BTreeMap::new() })
    }

    pub(crate) fn from_parts(
        config: SampleConfig,
        hashes: Vec<HashFn>,
        cells: BTreeMap<CellId, CellSketch>,
    ) -> Result<Self, SampleError> {
        config.validate()?;
        let codec = KeyCodec::new(config.vertex_bound, config.max_arity)?;
        if hashes.len() != config.repetitions as usize {
            return Err(SampleError::Config("hash count does not match repetitions".into()));
        }
        Ok(SampleSketch { config, codec, hashes, cells })
    }

    pub fn config(&self) -> &SampleConfig {
        &self.config
    }

    pub fn hashes(&self) -> &[HashFn] {
        &self.hashes
    }

    pub fn cells(&self) -> &BTreeMap<CellId, CellSketch> {
        &self.cells
    }

    pub fn codec(&self) -> &KeyCodec {
        &self.codec
    }

    /// Distinct weights seen, ascending; a weight's class id is its index.
    pub fn weight_classes(&self) -> Vec<Weight> {
        let set: BTreeSet<Weight> = self.cells.keys().map(|c| c.weight).collect();
        set.into_iter().collect()
    }

    pub(crate) fn new_cell(&self, id: &CellId) -> Result<CellSketch, SampleError> {
        fresh_cell(&self.config, &self.codec, id)
    }

    /// Routes one update into its cell in every repetition whose coloring gives
    /// the edge at most `d` colors.
    pub fn process_update(&mut self, update: &EdgeUpdate) -> Result<(), SampleError> {
        let edge = &update.edge;
        edge.check_bound(self.config.vertex_bound)?;
        if edge.arity() > self.config.max_arity {
            return Err(EdgeError::ArityTooLarge { arity: edge.arity(), max: self.config.max_arity }.into());
        }
        let key = self.codec.encode(edge);
        let delta = update.delta.sign();
        for j in 0..self.hashes.len() {
            let colors = self.hashes[j].color_set(edge.vertices());
            if colors.len() > self.config.max_color_set {
                continue;
            }
            let id = CellId { repetition: j as u32, weight: update.weight, colors };
            match self.cells.entry(id) {
                Entry::Occupied(mut e) => e.get_mut().update(key, delta),
                Entry::Vacant(e) => {
                    let mut cell = fresh_cell(&self.config, &self.codec, e.key())?;
                    cell.update(key, delta);
                    e.insert(cell);
                }
            }
        }
        Ok(())
    }

    pub fn extend<'a, I>(&mut self, updates: I) -> Result<(), SampleError>
    where
        I: IntoIterator<Item = &'a EdgeUpdate>,
    {
        updates.into_iter().try_for_each(|u| self.process_update(u))
    }

    /// Queries every cell and collects the recovered edges.
    pub fn extract_subgraph(&self) -> Result<SampledSubgraph, SampleError> {
        if self.config.cell_mode == CellMode::Counter {
            return Err(SampleError::CounterMode);
        }
        let mut out = SampledSubgraph { vertex_bound: self.config.vertex_bound, ..Default::default() };
        for (id, cell) in &self.cells {
            match cell.query() {
                CellQuery::Key(key) => match self.codec.decode(key) {
                    Ok(edge) if self.hashes[id.repetition as usize].color_set(edge.vertices()) == id.colors => {
                        out.edges.push(SampledEdge {
                            edge,
                            weight: id.weight,
                            repetition: id.repetition,
                            colors: id.colors.clone(),
                        });
                    }
                    _ => out.corrupt_cells += 1,
                },
                CellQuery::Empty => {}
                CellQuery::Fail => out.failed_cells += 1,
                CellQuery::Corrupt => out.corrupt_cells += 1,
            }
        }
        Ok(out)
    }

    /// One contracted graph per repetition: an edge between two color classes
    /// (or a singleton for an intra-class edge) wherever the cell count is nonzero.
    pub fn extract_contracted(&self) -> Result<Vec<ContractedGraph>, SampleError> {
        if self.config.max_color_set != 2 {
            return Err(SampleError::NotPairwise(self.config.max_color_set));
        }
        let mut graphs: Vec<ContractedGraph> = (0..self.config.repetitions)
            .map(|j| ContractedGraph { repetition: j, colors: self.config.colors, edges: BTreeMap::new() })
            .collect();
        for (id, cell) in &self.cells {
            let count = cell.net_count();
            if count != 0 {
                *graphs[id.repetition as usize].edges.entry(id.colors.clone()).or_insert(0) += count;
            }
        }
        for g in &mut graphs {
            g.edges.retain(|_, c| *c != 0);
        }
        Ok(graphs)
    }

    /// Cell-wise sum. Cells absent on one side count as zero.
    pub fn merge_from(&mut self, other: &SampleSketch) -> Result<(), SampleError> {
        if self.config != other.config {
            return Err(SketchError::Mismatch(format!(
                "sample configurations differ ({:?} vs {:?})",
                self.config, other.config
            ))
            .into());
        }
        if self.hashes != other.hashes {
            return Err(SketchError::Mismatch("hash functions differ".into()).into());
        }
        for (id, cell) in &other.cells {
            match self.cells.get_mut(id) {
                Some(mine) => mine.merge_from(cell)?,
                None => {
                    self.cells.insert(id.clone(), cell.clone());
                }
            }
        }
        Ok(())
    }

    pub fn space_report(&self) -> SpaceReport {
        let mut per_repetition = vec![0usize; self.config.repetitions as usize];
        let mut bytes = 0;
        for (id, cell) in &self.cells {
            per_repetition[id.repetition as usize] += 1;
            bytes += cell.approx_bytes() + 16 + 4 * id.colors.len();
        }
        bytes += self.hashes.iter().map(|h| 8 * h.independence() + 16).sum::<usize>();
        SpaceReport { cells: self.cells.len(), bytes, per_repetition }
    }
}

/// Merges two sample sketches, consuming both.
pub fn merge_samples(mut a: SampleSketch, b: SampleSketch) -> Result<SampleSketch, SampleError> {
    a.merge_from(&b)?;
    Ok(a)
}

/// Number of color sets of size at most `d` over `b` colors.
pub fn color_sets_up_to(b: u64, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 1..=d as u64 {
        if i > b {
            break;
        }
        binom = binom * u128::from(b - i + 1) / u128::from(i);
        total += binom;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Delta, EdgeUpdate};

    fn ins(u: u32, v: u32) -> EdgeUpdate {
        EdgeUpdate::insert(Edge::pair(u, v).unwrap())
    }

    #[test]
    fn create_is_lazy_and_deterministic() {
        let cfg = SampleConfig::new(10, 2, 3, 100).with_seed(5);
        let a = SampleSketch::new(cfg.clone()).unwrap();
        let b = SampleSketch::new(cfg).unwrap();
        assert_eq!(a.hashes().len(), 3);
        assert_eq!(a.cells().len(), 0);
        assert_eq!(a.hashes(), b.hashes());
        assert_eq!(a.space_report().cells, 0);
    }

    #[test]
    fn cell_bound_counts_color_sets() {
        assert_eq!(color_sets_up_to(500, 2), 125_250);
        assert_eq!(color_sets_up_to(3, 3), 7);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(SampleSketch::new(SampleConfig::new(0, 2, 1, 10)).is_err());
        assert!(SampleSketch::new(SampleConfig::new(4, 3, 1, 10).with_max_arity(2)).is_err());
        assert!(SampleSketch::new(SampleConfig::new(4, 2, 0, 10)).is_err());
        assert!(SampleSketch::new(SampleConfig::new(4, 2, 1, 10).with_independence(1)).is_err());
    }

    #[test]
    fn monochromatic_semantics_for_d1() {
        let cfg = SampleConfig::new(8, 1, 20, 100).with_seed(3).with_mode(CellMode::L0);
        let mut s = SampleSketch::new(cfg).unwrap();
        let up = ins(10, 20);
        s.process_update(&up).unwrap();
        for (j, h) in s.hashes().iter().enumerate() {
            let same = h.eval(10).unwrap() == h.eval(20).unwrap();
            let touched = s.cells().keys().any(|c| c.repetition == j as u32);
            assert_eq!(same, touched);
        }
    }

    #[test]
    fn single_edge_appears_wherever_tracked() {
        for mode in [CellMode::XorUnique, CellMode::L0] {
            let cfg = SampleConfig::new(6, 2, 8, 50).with_seed(11).with_mode(mode);
            let mut s = SampleSketch::new(cfg).unwrap();
            s.process_update(&ins(4, 9)).unwrap();
            let g = s.extract_subgraph().unwrap();
            assert_eq!(g.edges.len(), 8);
            assert!(g.edges.iter().all(|e| e.edge == Edge::pair(4, 9).unwrap()));
        }
    }

    #[test]
    fn insert_then_delete_restores_cells() {
        let cfg = SampleConfig::new(6, 2, 4, 50).with_seed(1).with_mode(CellMode::L0);
        let mut s = SampleSketch::new(cfg).unwrap();
        s.process_update(&ins(1, 2)).unwrap();
        let mut del = ins(1, 2);
        del.delta = Delta::Delete;
        s.process_update(&del).unwrap();
        assert!(s.cells().values().all(CellSketch::is_zero));
        assert!(s.extract_subgraph().unwrap().edges.is_empty());
    }

    #[test]
    fn counter_mode_refuses_extraction() {
        let s = SampleSketch::new(SampleConfig::new(6, 2, 1, 50).with_mode(CellMode::Counter)).unwrap();
        assert_eq!(s.extract_subgraph(), Err(SampleError::CounterMode));
    }

    #[test]
    fn out_of_range_vertex_is_an_error() {
        let mut s = SampleSketch::new(SampleConfig::new(6, 2, 1, 50)).unwrap();
        assert!(matches!(s.process_update(&ins(3, 50)), Err(SampleError::Edge(_))));
    }

    #[test]
    fn contracted_edges_follow_counts() {
        // identity coloring mod 10 makes colors predictable
        let cfg = SampleConfig::new(10, 2, 1, 100).with_mode(CellMode::Counter);
        let mut s = SampleSketch::new(cfg).unwrap();
        let h = HashFn::from_parts(101, vec![0, 1], 10, 100).unwrap();
        s.hashes = vec![h];
        s.process_update(&ins(2, 5)).unwrap();
        s.process_update(&ins(12, 15)).unwrap();
        let g = &s.extract_contracted().unwrap()[0];
        assert_eq!(g.edges.get(&ColorSet([2, 5].into_iter().collect())), Some(&2));
        assert_eq!(g.proper_edges().collect::<Vec<_>>(), vec![(2, 5)]);
        let mut del = ins(2, 5);
        del.delta = Delta::Delete;
        s.process_update(&del).unwrap();
        let mut del = ins(12, 15);
        del.delta = Delta::Delete;
        s.process_update(&del).unwrap();
        assert!(s.extract_contracted().unwrap()[0].edges.is_empty());
    }

    #[test]
    fn merge_rejects_config_mismatch() {
        let a = SampleSketch::new(SampleConfig::new(6, 2, 1, 50)).unwrap();
        let b = SampleSketch::new(SampleConfig::new(7, 2, 1, 50)).unwrap();
        assert!(merge_samples(a, b).is_err());
    }

    #[test]
    fn merge_with_fresh_is_identity() {
        let cfg = SampleConfig::new(6, 2, 3, 50).with_seed(2).with_mode(CellMode::L0);
        let mut a = SampleSketch::new(cfg.clone()).unwrap();
        for (u, v) in [(1, 2), (2, 3), (7, 30)] {
            a.process_update(&ins(u, v)).unwrap();
        }
        let merged = merge_samples(a.clone(), SampleSketch::new(cfg).unwrap()).unwrap();
        assert_eq!(merged, a);
    }
}
