use crate::multigraph::{EdgeId, MultiGraph, VertexId};

use super::{Cycle, PrimitiveError};

/// Splits a closed walk that uses each edge once into simple cycles.
///
/// The walk starts at `start` and follows `edges` in order. Vertices are
/// pushed on a stack; arriving at a vertex already on the stack pops the
/// cycle closed there (innermost first). Total length is preserved.
pub fn split_circuit(
    g: &MultiGraph,
    start: VertexId,
    edges: &[EdgeId],
) -> Result<Vec<Cycle>, PrimitiveError> {
    let mut seen_edges: Vec<EdgeId> = edges.to_vec();
    seen_edges.sort_unstable();
    if let Some(w) = seen_edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(PrimitiveError::WalkRepeatsEdge(w[0]));
    }

    // Each visit of a vertex gets a stack position; `on_stack` maps a vertex
    // to its current position.
    let mut on_stack: std::collections::HashMap<VertexId, usize> = std::collections::HashMap::new();
    let mut stack_vertices = vec![start];
    let mut stack_edges: Vec<EdgeId> = Vec::new();
    on_stack.insert(start, 0);
    let mut at = start;
    let mut cycles = Vec::new();

    for (step, &e) in edges.iter().enumerate() {
        if e.index() >= g.edge_slots() {
            return Err(crate::multigraph::GraphError::EdgeOutOfRange(e).into());
        }
        let (a, b) = g.endpoints(e);
        if a != at && b != at {
            return Err(PrimitiveError::WalkBroken { step, edge: e, at });
        }
        let next = if a == at { b } else { a };
        stack_edges.push(e);
        if let Some(&pos) = on_stack.get(&next) {
            let vertices: Vec<VertexId> = stack_vertices.drain(pos..).collect();
            let cycle_edges: Vec<EdgeId> = stack_edges.drain(pos..).collect();
            for v in &vertices[1..] {
                on_stack.remove(v);
            }
            stack_vertices.push(next);
            cycles.push(Cycle {
                vertices,
                edges: cycle_edges,
            });
        } else {
            on_stack.insert(next, stack_vertices.len());
            stack_vertices.push(next);
        }
        at = next;
    }

    if at != start || !stack_edges.is_empty() {
        return Err(PrimitiveError::WalkNotClosed { start, end: at });
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::VertexId as V;

    fn e(i: u32) -> EdgeId {
        EdgeId(i)
    }

    #[test]
    fn triangle_stays_whole() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let cycles = split_circuit(&g, V(0), &[e(0), e(1), e(2)]).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices, vec![V(0), V(1), V(2)]);
        assert!(cycles[0].is_simple_in(&g));
    }

    #[test]
    fn figure_eight_splits_in_two() {
        // a=0, b=1, c=2: walk a-b-a-c-a over parallel pairs.
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]).unwrap();
        let cycles = split_circuit(&g, V(0), &[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 2 && c.is_simple_in(&g)));
    }

    #[test]
    fn self_loop_is_one_cycle() {
        let g = MultiGraph::from_edges(1, &[(0, 0)]).unwrap();
        let cycles = split_circuit(&g, V(0), &[e(0)]).unwrap();
        assert_eq!(cycles, vec![Cycle { vertices: vec![V(0)], edges: vec![e(0)] }]);
    }

    #[test]
    fn nested_revisit_pops_innermost_first() {
        // 0-1-2-1-0 via distinct edges: inner 2-cycle at 1, then the outer 2-cycle at 0.
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 1), (1, 0)]).unwrap();
        let cycles = split_circuit(&g, V(0), &[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(cycles[0].edges, vec![e(1), e(2)]);
        assert_eq!(cycles[1].edges, vec![e(0), e(3)]);
    }

    #[test]
    fn rejects_open_or_repeating_walks() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            split_circuit(&g, V(0), &[e(0), e(1)]),
            Err(PrimitiveError::WalkNotClosed { .. })
        ));
        assert_eq!(
            split_circuit(&g, V(0), &[e(0), e(0)]).unwrap_err(),
            PrimitiveError::WalkRepeatsEdge(e(0))
        );
        assert!(matches!(
            split_circuit(&g, V(0), &[e(1)]),
            Err(PrimitiveError::WalkBroken { step: 0, .. })
        ));
    }
}
