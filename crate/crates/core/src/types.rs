//! Stream tokens and the canonical edge representation shared by every module.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EdgeError {
    #[error("edge has no vertices")]
    Empty,
    #[error("edge repeats vertex {0}")]
    RepeatedVertex(VertexId),
    #[error("vertex {vertex} is outside the domain [0, {bound})")]
    VertexOutOfRange { vertex: VertexId, bound: u64 },
    #[error("edge arity {arity} exceeds the maximum {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("weight {0} is not a finite positive number")]
    BadWeight(f64),
}

/// An edge or hyperedge: a sorted, duplicate-free vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Edge(Vec<VertexId>);

impl Edge {
    /// Canonicalizes `vertices` (sorts them) and rejects repeats.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, EdgeError> {
        if vertices.is_empty() {
            return Err(EdgeError::Empty);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(EdgeError::RepeatedVertex(w[0]));
        }
        Ok(Edge(vertices))
    }

    pub fn pair(u: VertexId, v: VertexId) -> Result<Self, EdgeError> {
        Edge::new(vec![u, v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersects(&self, other: &Edge) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    /// Errors if any vertex is `>= bound`.
    pub fn check_bound(&self, bound: u64) -> Result<(), EdgeError> {
        match self.0.iter().find(|&&v| u64::from(v) >= bound) {
            Some(&vertex) => Err(EdgeError::VertexOutOfRange { vertex, bound }),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<VertexId>> for Edge {
    type Error = EdgeError;
    fn try_from(v: Vec<VertexId>) -> Result<Self, EdgeError> {
        Edge::new(v)
    }
}

impl From<Edge> for Vec<VertexId> {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Edge weight with a total order, so it can key maps.
#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub const ONE: Weight = Weight(1.0);

    pub fn new(w: f64) -> Result<Self, EdgeError> {
        if w.is_finite() && w > 0.0 {
            Ok(Weight(w))
        } else {
            Err(EdgeError::BadWeight(w))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn to_bits(self) -> u64 {
        self.0.to_bits()
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::ONE
    }
}

impl TryFrom<f64> for Weight {
    type Error = EdgeError;
    fn try_from(w: f64) -> Result<Self, EdgeError> {
        Weight::new(w)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Delta {
    Insert,
    Delete,
}

impl Delta {
    pub fn sign(self) -> i64 {
        match self {
            Delta::Insert => 1,
            Delta::Delete => -1,
        }
    }
}

/// One stream token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeUpdate {
    pub edge: Edge,
    pub weight: Weight,
    pub delta: Delta,
}

impl EdgeUpdate {
    pub fn insert(edge: Edge) -> Self {
        EdgeUpdate { edge, weight: Weight::ONE, delta: Delta::Insert }
    }

    pub fn delete(edge: Edge) -> Self {
        EdgeUpdate { edge, weight: Weight::ONE, delta: Delta::Delete }
    }

    pub fn with_weight(mut self, weight: Weight) -> Self {
        self.weight = weight;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_canonical() {
        let e = Edge::new(vec![7, 3]).unwrap();
        assert_eq!(e.vertices(), &[3, 7]);
        assert_eq!(e, Edge::pair(3, 7).unwrap());
        assert_eq!(Edge::new(vec![]), Err(EdgeError::Empty));
        assert_eq!(Edge::new(vec![4, 2, 4]), Err(EdgeError::RepeatedVertex(4)));
    }

    #[test]
    fn intersection() {
        let a = Edge::new(vec![1, 4, 9]).unwrap();
        let b = Edge::new(vec![2, 9]).unwrap();
        let c = Edge::new(vec![0, 5]).unwrap();
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
    }

    #[test]
    fn weights_order_and_reject_nonpositive() {
        assert!(Weight::new(0.0).is_err());
        assert!(Weight::new(f64::NAN).is_err());
        assert!(Weight::new(2.0).unwrap() > Weight::ONE);
    }
}
