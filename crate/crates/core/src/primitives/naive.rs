use crate::multigraph::{EdgeId, MultiGraph, VertexId};

use super::{Cycle, VertexDisjointCycleSet};

/// Largest cycle length allowed by `2·log2(n)`, i.e. the largest `L` with
/// `2^L ≤ n²`. A lone vertex with loops still yields 1-cycles, so the bound
/// never drops below 1.
pub fn naive_length_bound(n: usize) -> usize {
    let sq = (n as u128) * (n as u128);
    let mut len = 0usize;
    while len < 127 && (1u128 << (len + 1)) <= sq {
        len += 1;
    }
    len.max(1)
}

struct Peeler {
    queue: Vec<VertexId>,
    queued: Vec<bool>,
}

impl Peeler {
    fn push(&mut self, g: &MultiGraph, v: VertexId) {
        if g.is_vertex_active(v) && g.degree(v) <= 2 && !self.queued[v.index()] {
            self.queued[v.index()] = true;
            self.queue.push(v);
        }
    }

    /// Deletes vertex `v` and queues neighbors whose degree fell to ≤ 2.
    fn delete(&mut self, g: &mut MultiGraph, v: VertexId) {
        let neighbors: Vec<VertexId> = g.incident(v).iter().map(|&e| g.opposite(e, v)).collect();
        g.remove_vertex(v);
        for y in neighbors {
            self.push(g, y);
        }
    }

    fn run(&mut self, g: &mut MultiGraph) {
        while let Some(x) = self.queue.pop() {
            self.queued[x.index()] = false;
            if g.is_vertex_active(x) {
                self.delete(g, x);
            }
        }
    }
}

/// Repeatedly peels vertices of degree ≤ 2, then runs BFS from the lowest
/// remaining vertex until the first non-tree edge and removes the cycle it
/// closes.
///
/// Cycles are vertex-disjoint, have length at most `2·log2(n)` and cover at
/// least `(m − 2n)/Δ` vertices.
pub fn naive_short_cycle(g: &MultiGraph) -> VertexDisjointCycleSet {
    let mut work = g.clone();
    let slots = work.vertex_slots();
    let mut peeler = Peeler {
        queue: Vec::new(),
        queued: vec![false; slots],
    };
    for v in g.vertices() {
        peeler.push(&work, v);
    }
    peeler.run(&mut work);

    let mut visited = vec![false; slots];
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; slots];
    let mut depth = vec![0u32; slots];
    let mut order: Vec<VertexId> = Vec::new();
    let mut out = VertexDisjointCycleSet::new();
    let mut next_root = 0usize;

    loop {
        while next_root < slots && !work.is_vertex_active(VertexId::from(next_root)) {
            next_root += 1;
        }
        if next_root == slots {
            break;
        }
        let root = VertexId::from(next_root);

        for &v in &order {
            visited[v.index()] = false;
            parent[v.index()] = None;
        }
        order.clear();
        visited[root.index()] = true;
        depth[root.index()] = 0;
        order.push(root);

        let mut closing: Option<(VertexId, VertexId, EdgeId)> = None;
        let mut head = 0;
        'bfs: while head < order.len() {
            let x = order[head];
            head += 1;
            let parent_edge = parent[x.index()].map(|(_, e)| e);
            for &e in work.incident(x) {
                if Some(e) == parent_edge {
                    continue;
                }
                let y = work.opposite(e, x);
                if y != x && !visited[y.index()] {
                    visited[y.index()] = true;
                    parent[y.index()] = Some((x, e));
                    depth[y.index()] = depth[x.index()] + 1;
                    order.push(y);
                } else {
                    closing = Some((x, y, e));
                    break 'bfs;
                }
            }
        }
        // Minimum degree 3 guarantees a non-tree edge in the root's component.
        let (x, y, e) = closing.expect("min-degree-3 component contains a cycle");
        let cycle = close_cycle(&parent, &depth, x, y, e);
        for &v in &cycle.vertices {
            peeler.delete(&mut work, v);
        }
        out.cycles.push(cycle);
        peeler.run(&mut work);
    }
    out
}

/// Cycle formed by non-tree edge `e = (x, y)` and the tree paths to the
/// lowest common ancestor: `x -e-> y -> ... -> lca -> ... -> x`.
fn close_cycle(
    parent: &[Option<(VertexId, EdgeId)>],
    depth: &[u32],
    x: VertexId,
    y: VertexId,
    e: EdgeId,
) -> Cycle {
    if x == y {
        return Cycle {
            vertices: vec![x],
            edges: vec![e],
        };
    }
    let (mut a, mut b) = (x, y);
    let mut up_from_y = Vec::new(); // (vertex, edge to its parent)
    let mut up_from_x = Vec::new();
    while a != b {
        if depth[b.index()] >= depth[a.index()] {
            let (p, pe) = parent[b.index()].expect("non-root has a parent");
            up_from_y.push((b, pe));
            b = p;
        } else {
            let (p, pe) = parent[a.index()].expect("non-root has a parent");
            up_from_x.push((a, pe));
            a = p;
        }
    }
    let lca = a;
    let mut vertices = vec![x];
    let mut edges = vec![e];
    for &(v, pe) in &up_from_y {
        vertices.push(v);
        edges.push(pe);
    }
    if lca != x {
        vertices.push(lca);
    }
    for &(v, pe) in up_from_x.iter().rev() {
        edges.push(pe);
        if v != x {
            vertices.push(v);
        }
    }
    Cycle { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid(g: &MultiGraph, set: &VertexDisjointCycleSet) {
        assert!(set.is_vertex_disjoint());
        let bound = naive_length_bound(g.vertex_count());
        for c in &set.cycles {
            assert!(c.is_simple_in(g), "{c:?}");
            assert!(c.len() <= bound);
        }
    }

    #[test]
    fn length_bound_values() {
        assert_eq!(naive_length_bound(1), 1);
        assert_eq!(naive_length_bound(2), 2);
        assert_eq!(naive_length_bound(3), 3);
        assert_eq!(naive_length_bound(4), 4);
        assert_eq!(naive_length_bound(1024), 20);
        assert_eq!(naive_length_bound(1000), 19);
    }

    #[test]
    fn triangle_peels_away() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(naive_short_cycle(&g).is_empty());
    }

    #[test]
    fn complete_graph_on_four() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let set = naive_short_cycle(&g);
        assert_eq!(set.len(), 1);
        assert!((3..=4).contains(&set.cycles[0].len()));
        valid(&g, &set);
    }

    #[test]
    fn triple_parallel_edges() {
        let g = MultiGraph::from_edges(2, &[(0, 1); 3]).unwrap();
        let set = naive_short_cycle(&g);
        assert_eq!(set.len(), 1);
        assert_eq!(set.cycles[0].len(), 2);
        valid(&g, &set);
    }

    #[test]
    fn loops_on_a_single_vertex() {
        let g = MultiGraph::from_edges(1, &[(0, 0), (0, 0)]).unwrap();
        let set = naive_short_cycle(&g);
        assert_eq!(set.cycles[0].len(), 1);
        valid(&g, &set);
    }

    #[test]
    fn cycle_through_deep_lca() {
        // Root 0 with three long-ish branches closing deep in the tree.
        let g = MultiGraph::from_edges(
            7,
            &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (4, 5), (6, 3), (4, 6), (5, 3), (2, 3)],
        )
        .unwrap();
        let set = naive_short_cycle(&g);
        assert!(!set.is_empty());
        valid(&g, &set);
    }

    #[test]
    fn yield_bound_on_dense_inputs() {
        let n = 60;
        let mut x: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut edges = Vec::new();
        for v in 0..n {
            for _ in 0..3 {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                edges.push((v, (x % n as u64) as usize));
            }
        }
        let g = MultiGraph::from_edges(n, &edges).unwrap();
        let set = naive_short_cycle(&g);
        valid(&g, &set);
        let (m, delta) = (g.edge_count(), g.max_degree());
        assert!(set.total_vertices() * delta >= m.saturating_sub(2 * n));
    }
}
