//! Short cycle decomposition of undirected multigraphs.
//!
//! [`engine::decompose`] splits the edges of any multigraph into
//! edge-disjoint cycles of length `O(log n)^c` plus at most `20n` leftover
//! edges. The building blocks live in [`multigraph`], [`ldd`] and
//! [`primitives`]; [`verification`] checks results independently and
//! [`io`] covers file formats, generators and benchmarking.

pub mod engine;
pub mod io;
pub mod ldd;
pub mod multigraph;
pub mod primitives;
pub mod ratio;
pub mod verification;

pub use engine::{decompose, CycleDecomposition, EngineConfig, EngineError};
pub use multigraph::{EdgeId, MultiGraph, VertexId};
pub use primitives::{Cycle, VertexDisjointCycleSet};
