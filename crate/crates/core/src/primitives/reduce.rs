use crate::multigraph::{EdgeId, MultiGraph, VertexId};

use super::PrimitiveError;

/// Bounded-degree copy of a graph produced by [`graph_reduce`].
#[derive(Clone, Debug)]
pub struct ReductionMap {
    pub h: MultiGraph,
    /// Source vertex of every split copy. Padding vertices added by
    /// [`ReductionMap::pad_to`] have no entry.
    pub origin_vertex: Vec<VertexId>,
    /// `origin_edge[h_edge]` is the source edge; a bijection onto the
    /// active edges of the source graph.
    pub origin_edge: Vec<EdgeId>,
    /// Block size `D = ceil(2m/n)`.
    pub block_size: usize,
}

impl ReductionMap {
    pub fn origin_of(&self, v: VertexId) -> Option<VertexId> {
        self.origin_vertex.get(v.index()).copied()
    }

    /// Appends isolated vertices until `h` has `n` vertices.
    pub fn pad_to(&mut self, n: usize) {
        while self.h.vertex_slots() < n {
            self.h.add_vertex();
        }
    }
}

/// Splits every vertex into copies of degree at most `D = ceil(2m/n)`.
///
/// The half-edges of `v` (a self-loop contributes both of its ends), taken in
/// edge order, are cut into consecutive blocks of `D`; each block becomes one new vertex.
/// The result has at most `2n` vertices and exactly `m` edges, with edge `i`
/// of `h` coming from the `i`-th active edge of `g`.
pub fn graph_reduce(g: &MultiGraph) -> Result<ReductionMap, PrimitiveError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n == 0 || m < n {
        return Err(PrimitiveError::TooFewEdges { n, m });
    }
    let block = (2 * m).div_ceil(n);

    // Copies of v are numbered consecutively from base[v]; the t-th half-edge
    // of v in edge-id order lands in copy base[v] + t / D.
    let mut base = vec![u32::MAX; g.vertex_slots()];
    let mut origin_vertex = Vec::new();
    for v in g.vertices() {
        base[v.index()] = origin_vertex.len() as u32;
        let copies = g.degree(v).div_ceil(block);
        origin_vertex.extend(std::iter::repeat_n(v, copies));
    }
    let mut seen = vec![0usize; g.vertex_slots()];
    let mut place = |x: VertexId| {
        let t = seen[x.index()];
        seen[x.index()] += 1;
        base[x.index()] + (t / block) as u32
    };
    // copy[e] = H vertices holding the (u-side, v-side) ends of edge e.
    let mut copy = vec![[u32::MAX; 2]; g.edge_slots()];
    for e in g.edges() {
        let (a, b) = g.endpoints(e);
        copy[e.index()] = [place(a), place(b)];
    }

    let mut pairs = Vec::with_capacity(m);
    let mut origin_edge = Vec::with_capacity(m);
    for e in g.edges() {
        let [a, b] = copy[e.index()];
        pairs.push((a, b));
        origin_edge.push(e);
    }
    let h = MultiGraph::from_pairs(origin_vertex.len(), &pairs);
    Ok(ReductionMap {
        h,
        origin_vertex,
        origin_edge,
        block_size: block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn no_split_needed() {
        let g = MultiGraph::from_edges(2, &[(0, 1); 4]).unwrap();
        let r = graph_reduce(&g).unwrap();
        assert_eq!(r.block_size, 4);
        assert_eq!(r.h.vertex_count(), 2);
        assert_eq!(r.h.edge_count(), 4);
    }

    #[test]
    fn rejects_sparse_input() {
        // Star K_{1,7} plus a disjoint edge.
        let edges: Vec<_> = (1..8).map(|i| (0, i)).chain([(8, 9)]).collect();
        let g = MultiGraph::from_edges(10, &edges).unwrap();
        assert_eq!(
            graph_reduce(&g).unwrap_err(),
            PrimitiveError::TooFewEdges { n: 10, m: 8 }
        );
    }

    #[test]
    fn splits_high_degree_vertex() {
        // Vertex 0 has degree 6; D = ceil(16/4) = 4.
        let g = MultiGraph::from_edges(
            4,
            &[(0, 1), (0, 1), (0, 2), (0, 2), (0, 3), (0, 3), (1, 2), (2, 3)],
        )
        .unwrap();
        let r = graph_reduce(&g).unwrap();
        assert_eq!(r.block_size, 4);
        assert_eq!(r.origin_vertex.iter().filter(|&&v| v == VertexId(0)).count(), 2);
        assert!(r.h.vertex_count() <= 8);
        assert!(r.h.max_degree() <= 4);
        assert_eq!(r.h.edge_count(), 8);
    }

    proptest! {
        #[test]
        fn reduction_bounds(n in 1usize..15, extra in 0usize..60, seed in any::<u64>()) {
            let m = n + extra;
            let mut x = seed | 1;
            let mut next = || { x ^= x << 13; x ^= x >> 7; x ^= x << 17; (x % n as u64) as usize };
            let edges: Vec<_> = (0..m).map(|_| (next(), next())).collect();
            let g = MultiGraph::from_edges(n, &edges).unwrap();
            let r = graph_reduce(&g).unwrap();
            prop_assert!(r.h.vertex_count() <= 2 * n);
            prop_assert_eq!(r.h.edge_count(), m);
            prop_assert!(r.h.max_degree() <= (2 * m).div_ceil(n));
            for e in r.h.edges() {
                let (a, b) = r.h.endpoints(e);
                let (x, y) = g.endpoints(r.origin_edge[e.index()]);
                let (oa, ob) = (r.origin_vertex[a.index()], r.origin_vertex[b.index()]);
                prop_assert!((oa, ob) == (x, y) || (oa, ob) == (y, x));
            }
        }
    }
}
