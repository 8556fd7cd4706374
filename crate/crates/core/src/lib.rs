//! Subgraph sampling over dynamic graph and hypergraph streams.
//!
//! The core primitive colors vertices with `r` independent hash functions and,
//! for every set of at most `d` colors, keeps one linear sketch of the edges
//! whose endpoints use exactly those colors. Recovering one edge per sketch
//! yields a small random subgraph that preserves matchings, vertex covers,
//! hitting sets and other parameterized optima; the algorithms in
//! [`algorithms`] solve those problems exactly on the recovered kernel.

pub mod algorithms;
pub mod hashing;
pub mod oracle;
pub mod sample;
pub mod sketches;
pub mod solvers;
pub mod stream_io;
pub mod types;
pub mod wire;

pub use types::{Delta, Edge, EdgeError, EdgeUpdate, VertexId, Weight};
