use crate::multigraph::{ContractionMap, MultiGraph, SpanningTree, VertexId};

use super::{Cycle, PrimitiveError, VertexDisjointCycleSet};

/// Lifts vertex-disjoint cycles of a contracted graph back to `g`.
///
/// For an H-cycle `v_1 … v_k` let `a_i b_{i+1} = f(v_i v_{i+1})` with
/// `a_i ∈ K_{v_i}` and `b_{i+1} ∈ K_{v_{i+1}}`. The lifted cycle is
/// `b_1 p_1 a_1 b_2 p_2 a_2 … b_k p_k a_k`, where `p_i` is the path from `b_i`
/// to `a_i` in `trees[v_i]`. Each part is entered once, so the result is
/// again simple and vertex-disjoint.
pub fn pull_up(
    g: &MultiGraph,
    cm: &ContractionMap,
    trees: &[SpanningTree],
    cycles_h: &VertexDisjointCycleSet,
) -> Result<VertexDisjointCycleSet, PrimitiveError> {
    let mut out = VertexDisjointCycleSet::new();
    for hc in &cycles_h.cycles {
        let k = hc.len();
        // ends[i] = (a_i, b_{i+1})
        let mut ends: Vec<(VertexId, VertexId)> = Vec::with_capacity(k);
        for i in 0..k {
            let (hv, hw) = (hc.vertices[i], hc.vertices[(i + 1) % k]);
            if hv.index() >= cm.parts.len() || hv.index() >= trees.len() {
                return Err(PrimitiveError::MissingPart(hv));
            }
            let ge = cm.injection(hc.edges[i]);
            let (x, y) = g.endpoints(ge);
            let (px, py) = (cm.part(x), cm.part(y));
            let here = Some(hv.index());
            let there = Some(hw.index());
            let pair = if px == here && py == there {
                (x, y)
            } else if py == here && px == there {
                (y, x)
            } else {
                return Err(PrimitiveError::InjectionMismatch {
                    h_edge: hc.edges[i],
                    edge: ge,
                });
            };
            ends.push(pair);
        }
        let mut cycle = Cycle {
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        for i in 0..k {
            let part = hc.vertices[i].index();
            let b_i = ends[(i + k - 1) % k].1;
            let a_i = ends[i].0;
            let path = trees[part].tree_path(b_i, a_i)?;
            cycle.vertices.extend(path.vertices);
            cycle.edges.extend(path.edges);
            cycle.edges.push(cm.injection(hc.edges[i]));
        }
        out.cycles.push(cycle);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{bfs_spanning_tree, contract, EdgeId};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn two_cycle_through_a_tree_edge() {
        // K1 = {a=0, b=1} joined by tree edge e0; K2 = {c=2}.
        let g = MultiGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let parts = vec![vec![v(0), v(1)], vec![v(2)]];
        let trees = vec![
            bfs_spanning_tree(&g, &parts[0], v(0)).unwrap(),
            bfs_spanning_tree(&g, &parts[1], v(2)).unwrap(),
        ];
        let cm = contract(&g, &parts, &[EdgeId(0)]).unwrap();
        let hc = Cycle {
            vertices: vec![v(0), v(1)],
            edges: vec![EdgeId(0), EdgeId(1)],
        };
        let set = VertexDisjointCycleSet { cycles: vec![hc] };
        let out = pull_up(&g, &cm, &trees, &set).unwrap();
        assert_eq!(out.cycles[0].len(), 3);
        assert!(out.cycles[0].is_simple_in(&g));
        assert!(out.total_vertices() >= set.total_vertices());
    }

    #[test]
    fn self_loop_in_h() {
        // Path 0-1-2 inside one part, plus the chord 0-2 which becomes a loop of H.
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let parts = vec![vec![v(0), v(1), v(2)]];
        let trees = vec![bfs_spanning_tree(&g, &parts[0], v(1)).unwrap()];
        let cm = contract(&g, &parts, &[EdgeId(0), EdgeId(1)]).unwrap();
        let set = VertexDisjointCycleSet {
            cycles: vec![Cycle { vertices: vec![v(0)], edges: vec![EdgeId(0)] }],
        };
        let out = pull_up(&g, &cm, &trees, &set).unwrap();
        assert_eq!(out.cycles[0].len(), 1 + 2);
        assert!(out.cycles[0].is_simple_in(&g));
    }

    #[test]
    fn graph_self_loop_stays_a_loop() {
        let g = MultiGraph::from_edges(1, &[(0, 0)]).unwrap();
        let parts = vec![vec![v(0)]];
        let trees = vec![SpanningTree::singleton(v(0))];
        let cm = contract(&g, &parts, &[]).unwrap();
        let set = VertexDisjointCycleSet {
            cycles: vec![Cycle { vertices: vec![v(0)], edges: vec![EdgeId(0)] }],
        };
        let out = pull_up(&g, &cm, &trees, &set).unwrap();
        assert_eq!(out.cycles[0].edges, vec![EdgeId(0)]);
    }

    #[test]
    fn identity_contraction_is_verbatim() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]).unwrap();
        let parts: Vec<_> = (0..4).map(|i| vec![v(i)]).collect();
        let trees: Vec<_> = (0..4).map(|i| SpanningTree::singleton(v(i))).collect();
        let cm = contract(&g, &parts, &[]).unwrap();
        let set = VertexDisjointCycleSet {
            cycles: vec![
                Cycle { vertices: vec![v(0), v(1), v(2)], edges: vec![EdgeId(0), EdgeId(1), EdgeId(2)] },
                Cycle { vertices: vec![v(3)], edges: vec![EdgeId(4)] },
            ],
        };
        assert_eq!(pull_up(&g, &cm, &trees, &set).unwrap(), set);
    }

    #[test]
    fn rejects_mismatched_injection() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let parts: Vec<_> = (0..3).map(|i| vec![v(i)]).collect();
        let trees: Vec<_> = (0..3).map(|i| SpanningTree::singleton(v(i))).collect();
        let cm = contract(&g, &parts, &[]).unwrap();
        // Claims an H 2-cycle between parts 0 and 2 that does not exist.
        let set = VertexDisjointCycleSet {
            cycles: vec![Cycle { vertices: vec![v(0), v(2)], edges: vec![EdgeId(0), EdgeId(1)] }],
        };
        assert!(matches!(
            pull_up(&g, &cm, &trees, &set),
            Err(PrimitiveError::InjectionMismatch { .. })
        ));
    }
}
