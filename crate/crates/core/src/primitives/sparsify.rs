use crate::multigraph::{EdgeId, MultiGraph, VertexId};

use super::PrimitiveError;

/// Removes tree edges bottom-up so that every vertex ends with even degree.
///
/// Each component gets a BFS tree; vertices are visited in reverse BFS
/// order (children before parents) and an odd-degree vertex drops the edge
/// to its parent. The root's parity follows from the handshake lemma.
fn make_degrees_even(g: &mut MultiGraph) {
    let slots = g.vertex_slots();
    let mut seen = vec![false; slots];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; slots];
    let mut order = Vec::new();
    for root in g.vertices().collect::<Vec<_>>() {
        if seen[root.index()] {
            continue;
        }
        seen[root.index()] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (&e, &y) in g.incident(x).iter().zip(g.neighbors(x)) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    parent_edge[y.index()] = Some(e);
                    order.push(y);
                }
            }
        }
    }
    for &v in order.iter().rev() {
        if g.degree(v) % 2 == 1 {
            if let Some(e) = parent_edge[v.index()] {
                g.remove_edge(e);
            }
        }
    }
}

/// Euler circuit of the component containing `start` (all degrees even),
/// by Hierholzer's method over incidence cursors.
fn euler_circuit(
    g: &MultiGraph,
    start: VertexId,
    cursor: &mut [usize],
    used: &mut [bool],
) -> Vec<EdgeId> {
    let mut circuit = Vec::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
    while let Some(&(v, via)) = stack.last() {
        let list = g.incident(v);
        while cursor[v.index()] < list.len() && used[list[cursor[v.index()]].index()] {
            cursor[v.index()] += 1;
        }
        if let Some(&e) = list.get(cursor[v.index()]) {
            used[e.index()] = true;
            stack.push((g.opposite(e, v), Some(e)));
        } else {
            stack.pop();
            if let Some(e) = via {
                circuit.push(e);
            }
        }
    }
    circuit.reverse();
    circuit
}

/// One halving round: even out degrees, then drop every other edge of each
/// component's Euler circuit, starting with the first.
fn halve(g: &mut MultiGraph) {
    make_degrees_even(g);
    let mut cursor = vec![0usize; g.vertex_slots()];
    let mut used = vec![false; g.edge_slots()];
    let mut drop = Vec::new();
    for v in g.vertices() {
        if g.incident(v).iter().all(|e| used[e.index()]) {
            continue;
        }
        let circuit = euler_circuit(g, v, &mut cursor, &mut used);
        drop.extend(circuit.into_iter().step_by(2));
    }
    for e in drop {
        g.remove_edge(e);
    }
}

/// Subgraph of `g` with exactly `k` edges and maximum degree at most
/// `(2k + 4n)·Δ(g)/m`, together with the number of halving rounds.
///
/// Edge ids are preserved; removed edges are inactive in the result.
pub fn sparsify_with_rounds(g: &MultiGraph, k: usize) -> Result<(MultiGraph, usize), PrimitiveError> {
    let m = g.edge_count();
    if k == 0 || k > m {
        return Err(PrimitiveError::BadSparsifyTarget { k, m });
    }
    let n = g.vertex_count();
    let mut out = g.clone();
    let mut rounds = 0;
    while out.edge_count() >= 2 * k + 2 * n {
        halve(&mut out);
        rounds += 1;
    }
    // Trim the highest ids first.
    let mut id = out.edge_slots();
    while out.edge_count() > k {
        id -= 1;
        out.remove_edge(EdgeId::from(id));
    }
    Ok((out, rounds))
}

pub fn sparsify(g: &MultiGraph, k: usize) -> Result<MultiGraph, PrimitiveError> {
    sparsify_with_rounds(g, k).map(|(g, _)| g)
}
