//! Standalone subroutines of the decomposition: degree reduction, circuit
//! splitting, the naive BFS cycle finder, tree splitting, pull-up through a
//! contraction, and degree-preserving sparsification.

mod circuit;
mod naive;
mod pull_up;
mod reduce;
mod sparsify;
mod tree_split;

use serde::Serialize;
use thiserror::Error;

use crate::multigraph::{EdgeId, GraphError, MultiGraph, VertexId};

pub use circuit::split_circuit;
pub use naive::{naive_length_bound, naive_short_cycle};
pub use pull_up::pull_up;
pub use reduce::{graph_reduce, ReductionMap};
pub use sparsify::{sparsify, sparsify_with_rounds};
pub use tree_split::{tree_split, LabeledTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("graph reduction needs m >= n >= 1 (n = {n}, m = {m})")]
    TooFewEdges { n: usize, m: usize },
    #[error("walk is not closed: starts at {start}, ends at {end}")]
    WalkNotClosed { start: VertexId, end: VertexId },
    #[error("walk repeats edge {0}")]
    WalkRepeatsEdge(EdgeId),
    #[error("walk step {step}: edge {edge} is not incident to {at}")]
    WalkBroken { step: usize, edge: EdgeId, at: VertexId },
    #[error("label sum {total} is below the threshold {threshold}")]
    LabelsBelowThreshold { total: u64, threshold: u64 },
    #[error("threshold must be positive")]
    ZeroThreshold,
    #[error("label {label} exceeds the declared cap {cap}")]
    LabelAboveCap { label: u64, cap: u64 },
    #[error("tree degree {degree} exceeds the declared bound {bound}")]
    TreeDegreeAboveBound { degree: usize, bound: usize },
    #[error("sparsify target {k} must lie in [1, {m}]")]
    BadSparsifyTarget { k: usize, m: usize },
    #[error("injected edge {edge} does not join the parts of contracted edge {h_edge}")]
    InjectionMismatch { h_edge: EdgeId, edge: EdgeId },
    #[error("contracted vertex {0} has no part or spanning tree")]
    MissingPart(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A closed walk without repeated edges. `edges[i]` joins `vertices[i]` to
/// `vertices[(i + 1) % len]`. Length 1 is a self-loop, length 2 a pair of
/// parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Relabels vertices and edges, e.g. from a subgraph into its parent.
    pub fn map(
        &self,
        mut vertex: impl FnMut(VertexId) -> VertexId,
        mut edge: impl FnMut(EdgeId) -> EdgeId,
    ) -> Cycle {
        Cycle {
            vertices: self.vertices.iter().map(|&v| vertex(v)).collect(),
            edges: self.edges.iter().map(|&e| edge(e)).collect(),
        }
    }

    /// True when every edge is active in `g`, joins the designated vertices,
    /// and no vertex or edge repeats.
    pub fn is_simple_in(&self, g: &MultiGraph) -> bool {
        let k = self.edges.len();
        if k == 0 || self.vertices.len() != k {
            return false;
        }
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs.dedup();
        let mut es = self.edges.clone();
        es.sort_unstable();
        es.dedup();
        if vs.len() != k || es.len() != k {
            return false;
        }
        (0..k).all(|i| {
            let e = self.edges[i];
            if !g.is_edge_active(e) {
                return false;
            }
            let (a, b) = g.endpoints(e);
            let (x, y) = (self.vertices[i], self.vertices[(i + 1) % k]);
            (a, b) == (x, y) || (a, b) == (y, x)
        })
    }
}

/// Cycles sharing no vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexDisjointCycleSet {
    pub cycles: Vec<Cycle>,
}

impl VertexDisjointCycleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total vertices covered; cycles are simple, so this is the sum of
    /// their lengths.
    pub fn total_vertices(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    pub fn used_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.cycles.iter().flat_map(|c| c.vertices.iter().copied())
    }

    pub fn max_length(&self) -> usize {
        self.cycles.iter().map(Cycle::len).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn extend(&mut self, other: VertexDisjointCycleSet) {
        self.cycles.extend(other.cycles);
    }

    pub fn is_vertex_disjoint(&self) -> bool {
        let mut all: Vec<VertexId> = self.used_vertices().collect();
        let before = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == before
    }
}
