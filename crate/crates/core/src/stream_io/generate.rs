use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{StreamError, StreamFile, StreamHeader};
use crate::types::{Edge, EdgeUpdate, VertexId, Weight};

/// Graph families with a known promise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Maximum matching exactly `k`: `⌈k/2⌉` hubs over a random leaf pool plus
    /// `k − ⌈k/2⌉` disjoint triangles, with extra hub–hub and hub–triangle edges.
    PlantedMatching { k: usize },
    /// Minimum hitting set and hypergraph matching exactly `k`: `k` sunflowers
    /// with one-vertex cores, `k+2` petals each, plus extra edges through cores.
    PlantedHittingSet { k: usize, d: usize },
    /// Union of `nu` random spanning trees, so arboricity at most `nu`.
    BoundedArboricity { nu: u32 },
    /// `rows × cols` grid (planar, arboricity 2).
    Grid { rows: usize, cols: usize },
    /// Complete bipartite graph `K_{a,b}`.
    BipartiteComplete { a: usize, b: usize },
    /// `m` distinct uniformly random edges of arity `d`.
    RandomGnm { m: usize, d: usize },
    /// Layers `L1..L4` with `|L2| = |L3| = |L4| = k/2`: complete bipartite
    /// `L1×L2` and `L2×L3`, perfect matching `L3×L4`; maximum matching `k`.
    Layered { k: usize },
    /// Perfect matching on all `n` vertices (`n` even).
    PerfectMatching,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: u64,
    /// Fraction of inserts that are later deleted, in `[0, 1)`.
    pub churn: f64,
    pub seed: u64,
    /// Edge weights are drawn uniformly from this list; empty means weight 1.
    pub weights: Vec<f64>,
    /// Relabel vertices by a random permutation of `[n]`.
    pub shuffle_labels: bool,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: u64) -> Self {
        GeneratorSpec { family, n, churn: 0.0, seed: 0, weights: Vec::new(), shuffle_labels: true }
    }

    pub fn with_churn(mut self, churn: f64) -> Self {
        self.churn = churn;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = weights;
        self
    }
}

/// A generated stream with the optimum its family guarantees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratedStream {
    pub stream: StreamFile,
    /// Name and value of the planted optimum, when the family fixes one.
    pub promise: Option<(String, usize)>,
    pub inserts: usize,
    pub deletes: usize,
}

fn infeasible<T>(m: impl Into<String>) -> Result<T, StreamError> {
    Err(StreamError::Infeasible(m.into()))
}

fn pair(u: usize, v: usize) -> Edge {
    Edge::pair(u as VertexId, v as VertexId).expect("generator pairs are distinct")
}

/// Final edge set of a family on vertices `0..n`, plus the planted optimum.
fn final_edges(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<(Vec<Edge>, Option<(String, usize)>), StreamError> {
    let n = spec.n as usize;
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let promise;
    match spec.family {
        Family::PlantedMatching { k } => {
            let hubs = k.div_ceil(2);
            let triangles = k - hubs;
            let used = hubs + 3 * triangles;
            if k == 0 || n < used + 2 * hubs.max(1) {
                return infeasible(format!("planted matching k={k} needs more than {n} vertices"));
            }
            let pool: Vec<usize> = (used..n).collect();
            let degree = (pool.len() / (2 * hubs)).max(2);
            for h in 0..hubs {
                for &leaf in pool.choose_multiple(rng, degree) {
                    edges.insert(pair(h, leaf));
                }
                if h + 1 < hubs && rng.gen_bool(0.5) {
                    edges.insert(pair(h, h + 1));
                }
            }
            for t in 0..triangles {
                let a = hubs + 3 * t;
                edges.insert(pair(a, a + 1));
                edges.insert(pair(a + 1, a + 2));
                edges.insert(pair(a, a + 2));
                for v in a..a + 3 {
                    if rng.gen_bool(0.5) {
                        edges.insert(pair(rng.gen_range(0..hubs), v));
                    }
                }
            }
            promise = Some(("matching".to_string(), k));
        }
        Family::PlantedHittingSet { k, d } => {
            if d < 2 || k == 0 {
                return infeasible("planted hitting set needs k ≥ 1 and d ≥ 2");
            }
            let petals = k + 2;
            let used = k + k * petals * (d - 1);
            if n < used + d {
                return infeasible(format!("planted hitting set needs more than {n} vertices"));
            }
            let mut next = k;
            for core in 0..k {
                for _ in 0..petals {
                    let mut e = vec![core as VertexId];
                    e.extend((next..next + d - 1).map(|v| v as VertexId));
                    next += d - 1;
                    edges.insert(Edge::new(e).expect("fresh petal"));
                }
            }
            // extra edges through one core and otherwise non-core vertices
            let others: Vec<usize> = (k..n).collect();
            for core in 0..k {
                for _ in 0..petals {
                    let mut e = vec![core as VertexId];
                    e.extend(others.choose_multiple(rng, d - 1).map(|&v| v as VertexId));
                    edges.insert(Edge::new(e).expect("distinct picks"));
                }
            }
            promise = Some(("hitting_set".to_string(), k));
        }
        Family::BoundedArboricity { nu } => {
            if n < 2 || nu == 0 {
                return infeasible("bounded arboricity needs n ≥ 2 and nu ≥ 1");
            }
            for _ in 0..nu {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                for i in 1..n {
                    let j = rng.gen_range(0..i);
                    edges.insert(pair(order[i], order[j]));
                }
            }
            promise = None;
        }
        Family::Grid { rows, cols } => {
            if rows * cols > n || rows * cols < 2 {
                return infeasible(format!("grid {rows}x{cols} does not fit {n} vertices"));
            }
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.insert(pair(v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.insert(pair(v, v + cols));
                    }
                }
            }
            promise = Some(("matching".to_string(), rows * cols / 2));
        }
        Family::BipartiteComplete { a, b } => {
            if a + b > n || a == 0 || b == 0 {
                return infeasible(format!("K_{{{a},{b}}} does not fit {n} vertices"));
            }
            for u in 0..a {
                for v in a..a + b {
                    edges.insert(pair(u, v));
                }
            }
            promise = Some(("matching".to_string(), a.min(b)));
        }
        Family::RandomGnm { m, d } => {
            let possible = binomial(n, d);
            if d == 0 || (m as f64) > possible * 0.5 {
                return infeasible(format!("{m} random {d}-edges over {n} vertices is too dense"));
            }
            let all: Vec<usize> = (0..n).collect();
            while edges.len() < m {
                let e: Vec<VertexId> = all.choose_multiple(rng, d).map(|&v| v as VertexId).collect();
                edges.insert(Edge::new(e).expect("distinct picks"));
            }
            promise = None;
        }
        Family::Layered { k } => {
            let half = k / 2;
            if k == 0 || k % 2 != 0 || n < 4 * half {
                return infeasible(format!("layered graph needs even k and n ≥ 2k, got k={k}, n={n}"));
            }
            let l1 = n - 3 * half;
            let (l2, l3, l4) = (l1, l1 + half, l1 + 2 * half);
            for u in 0..l1 {
                for v in l2..l2 + half {
                    edges.insert(pair(u, v));
                }
            }
            for u in l2..l2 + half {
                for v in l3..l3 + half {
                    edges.insert(pair(u, v));
                }
            }
            for i in 0..half {
                edges.insert(pair(l3 + i, l4 + i));
            }
            promise = Some(("matching".to_string(), k));
        }
        Family::PerfectMatching => {
            if n < 2 || n % 2 != 0 {
                return infeasible("perfect matching needs an even n ≥ 2");
            }
            for i in (0..n).step_by(2) {
                edges.insert(pair(i, i + 1));
            }
            promise = Some(("matching".to_string(), n / 2));
        }
    }
    Ok((edges.into_iter().collect(), promise))
}

fn binomial(n: usize, d: usize) -> f64 {
    (0..d).fold(1.0, |acc, i| acc * (n - i.min(n)) as f64 / (i + 1) as f64)
}

/// Builds the stream: the family's final edges plus decoy edges that are
/// inserted and later deleted, all in random order. With churn `c`, the decoy
/// count `X` solves `X = ⌊c·(|F| + X)⌋`, so deletes are `⌊c·inserts⌋`.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedStream, StreamError> {
    if !(0.0..1.0).contains(&spec.churn) {
        return infeasible(format!("churn {} outside [0, 1)", spec.churn));
    }
    if spec.n == 0 || spec.n > u64::from(u32::MAX) {
        return infeasible(format!("n = {} out of range", spec.n));
    }
    let weights = spec
        .weights
        .iter()
        .map(|&w| Weight::new(w).map_err(|e| StreamError::Infeasible(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (mut finals, promise) = final_edges(spec, &mut rng)?;
    let arity = finals.iter().map(Edge::arity).max().unwrap_or(2);
    let f = finals.len();
    let mut x = 0usize;
    while x != (spec.churn * (f + x) as f64).floor() as usize {
        x += 1;
    }
    let taken: BTreeSet<Edge> = finals.iter().cloned().collect();
    let n = spec.n as usize;
    let all: Vec<usize> = (0..n).collect();
    let room = binomial(n, arity) - f as f64;
    if (x as f64) > room * 0.5 {
        return infeasible(format!("not enough free {arity}-sets for {x} decoys"));
    }
    let mut decoys: BTreeSet<Edge> = BTreeSet::new();
    while decoys.len() < x {
        let e: Vec<VertexId> = all.choose_multiple(&mut rng, arity).map(|&v| v as VertexId).collect();
        let e = Edge::new(e).expect("distinct picks");
        if !taken.contains(&e) {
            decoys.insert(e);
        }
    }
    let mut decoys: Vec<Edge> = decoys.into_iter().collect();
    decoys.shuffle(&mut rng);
    finals.shuffle(&mut rng);
    let pick_weight = |rng: &mut ChaCha8Rng| weights.choose(rng).copied().unwrap_or(Weight::ONE);
    // timestamps: inserts uniform in [0,1), each decoy delete uniform after its insert
    let mut events: Vec<(f64, EdgeUpdate)> = Vec::with_capacity(f + 2 * x);
    for e in finals {
        let w = pick_weight(&mut rng);
        events.push((rng.gen::<f64>(), EdgeUpdate::insert(e).with_weight(w)));
    }
    for e in decoys {
        let w = pick_weight(&mut rng);
        let t = rng.gen::<f64>();
        let later = t + (1.0 - t) * rng.gen::<f64>();
        events.push((t, EdgeUpdate::insert(e.clone()).with_weight(w)));
        events.push((later.max(t + f64::EPSILON), EdgeUpdate::delete(e).with_weight(w)));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut updates: Vec<EdgeUpdate> = events.into_iter().map(|(_, u)| u).collect();
    if spec.shuffle_labels {
        let mut perm: Vec<VertexId> = (0..spec.n as VertexId).collect();
        perm.shuffle(&mut rng);
        for u in &mut updates {
            let e = Edge::new(u.edge.vertices().iter().map(|&v| perm[v as usize]).collect()).expect("permutation keeps vertices distinct");
            u.edge = e;
        }
    }
    let header = StreamHeader { n: spec.n, max_arity: arity.max(2), weighted: !weights.is_empty() };
    Ok(GeneratedStream { stream: StreamFile { header, updates }, promise, inserts: f + x, deletes: x })
}
