//! Independent checks for decompositions and reference solvers for small
//! instances. Nothing here reuses engine traversal code.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{CycleDecomposition, LevelStats};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::primitives::{Cycle, VertexDisjointCycleSet};

/// Largest graph the exhaustive solver accepts.
pub const BRUTE_FORCE_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("component is empty")]
    EmptyComponent,
    #[error("vertex {0} is not an active vertex of the graph")]
    BadVertex(VertexId),
    #[error("component is disconnected: reached {reached} of {expected} vertices")]
    Disconnected { reached: usize, expected: usize },
    #[error("edge {0} does not exist in the graph")]
    DanglingEdge(EdgeId),
    #[error("exhaustive search supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

/// Exact strong diameter of the subgraph induced by `component`, by BFS
/// from every vertex.
pub fn measure_diameter(g: &MultiGraph, component: &[VertexId]) -> Result<u32, VerifyError> {
    if component.is_empty() {
        return Err(VerifyError::EmptyComponent);
    }
    let mut local: HashMap<VertexId, usize> = HashMap::with_capacity(component.len());
    for &v in component {
        if v.index() >= g.vertex_slots() || !g.is_vertex_active(v) {
            return Err(VerifyError::BadVertex(v));
        }
        let next = local.len();
        local.entry(v).or_insert(next);
    }
    let n = local.len();
    let mut order: Vec<VertexId> = vec![VertexId(0); n];
    for (&v, &i) in &local {
        order[i] = v;
    }
    let adj: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            g.incident(v)
                .iter()
                .filter_map(|&e| local.get(&g.opposite(e, v)).copied())
                .collect()
        })
        .collect();

    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut diameter = 0;
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    diameter = diameter.max(dist[y]);
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != n {
            return Err(VerifyError::Disconnected { reached, expected: n });
        }
    }
    Ok(diameter)
}

/// One problem found in a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A cycle with no edges, or whose vertex and edge lists differ in length.
    MalformedCycle { cycle: usize },
    /// `edges[step]` does not join the vertices it is listed between.
    BrokenWalk { cycle: usize, step: usize, edge: EdgeId },
    /// A cycle passes through a vertex twice.
    NotSimple { cycle: usize, vertex: VertexId },
    /// An edge appears more than once: twice in cycles, or in a cycle and in
    /// the leftover, or twice in the leftover.
    DuplicateEdge { edge: EdgeId },
    /// An edge that was deleted before decomposition is referenced.
    InactiveEdge { edge: EdgeId },
    /// An active edge appears in neither a cycle nor the leftover.
    UncoveredEdge { edge: EdgeId },
    LeftoverTooLarge { leftover: usize, k_hat: usize },
    CycleTooLong { cycle: usize, length: usize, l_max: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub valid: bool,
    pub k_hat_observed: usize,
    pub max_cycle_length: usize,
    pub length_histogram: BTreeMap<usize, usize>,
    /// Cycle edges over all active edges, as `(numerator, denominator)`.
    pub coverage_fraction: (u64, u64),
    pub violations: Vec<Violation>,
    pub level_stats: Vec<LevelStats>,
}

/// Checks that `d` is a `(k_hat, l_max)` short cycle decomposition of `g`.
///
/// Every cycle must be a closed walk through the listed vertices, simple,
/// and no longer than `l_max`. The cycles and the leftover together must use
/// each active edge of `g` exactly once, and the leftover may hold at most
/// `k_hat` edges.
pub fn verify_decomposition(
    g: &MultiGraph,
    d: &CycleDecomposition,
    k_hat: usize,
    l_max: usize,
) -> Result<DecompositionReport, VerifyError> {
    let in_range = |e: EdgeId| {
        if e.index() < g.edge_slots() {
            Ok(())
        } else {
            Err(VerifyError::DanglingEdge(e))
        }
    };
    for c in &d.cycles {
        c.edges.iter().try_for_each(|&e| in_range(e))?;
        for &v in &c.vertices {
            if v.index() >= g.vertex_slots() {
                return Err(VerifyError::BadVertex(v));
            }
        }
    }
    d.leftover.iter().try_for_each(|&e| in_range(e))?;

    let mut violations = Vec::new();
    let mut histogram = BTreeMap::new();
    let mut max_len = 0;
    for (ci, c) in d.cycles.iter().enumerate() {
        let k = c.edges.len();
        *histogram.entry(k).or_insert(0) += 1;
        max_len = max_len.max(k);
        if k == 0 || c.vertices.len() != k {
            violations.push(Violation::MalformedCycle { cycle: ci });
            continue;
        }
        for (step, &e) in c.edges.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            let (x, y) = (c.vertices[step], c.vertices[(step + 1) % k]);
            if !((a == x && b == y) || (a == y && b == x)) {
                violations.push(Violation::BrokenWalk { cycle: ci, step, edge: e });
            }
        }
        let mut seen = HashSet::with_capacity(k);
        for &v in &c.vertices {
            if !seen.insert(v) {
                violations.push(Violation::NotSimple { cycle: ci, vertex: v });
                break;
            }
        }
        if k > l_max {
            violations.push(Violation::CycleTooLong { cycle: ci, length: k, l_max });
        }
    }

    let mut uses: HashMap<EdgeId, usize> = HashMap::new();
    for &e in d.cycles.iter().flat_map(|c| c.edges.iter()).chain(d.leftover.iter()) {
        *uses.entry(e).or_insert(0) += 1;
    }
    let mut referenced: Vec<_> = uses.iter().map(|(&e, &n)| (e, n)).collect();
    referenced.sort_unstable();
    for (e, n) in referenced {
        if n > 1 {
            violations.push(Violation::DuplicateEdge { edge: e });
        }
        if !g.is_edge_active(e) {
            violations.push(Violation::InactiveEdge { edge: e });
        }
    }
    for i in 0..g.edge_slots() {
        let e = EdgeId::from(i);
        if g.is_edge_active(e) && !uses.contains_key(&e) {
            violations.push(Violation::UncoveredEdge { edge: e });
        }
    }
    if d.leftover.len() > k_hat {
        violations.push(Violation::LeftoverTooLarge { leftover: d.leftover.len(), k_hat });
    }

    let cycle_edges: usize = d.cycles.iter().map(|c| c.edges.len()).sum();
    Ok(DecompositionReport {
        valid: violations.is_empty(),
        k_hat_observed: d.leftover.len(),
        max_cycle_length: max_len,
        length_histogram: histogram,
        coverage_fraction: (cycle_edges as u64, g.edge_count().max(1) as u64),
        violations,
        level_stats: d.levels.clone(),
    })
}

/// A maximum-coverage set of vertex-disjoint cycles of length at most
/// `l_max`, by exhaustive search. Refuses graphs with more than
/// [`BRUTE_FORCE_MAX_N`] active vertices.
///
/// A vertex set carries a cycle when it is a single vertex with a loop, two
/// vertices joined by at least two edges, or three or more vertices with a
/// Hamiltonian cycle in the induced graph. Those sets come from a DP over
/// (set, endpoint) paths anchored at the set's lowest vertex; the packing
/// is a second DP over subsets.
#[allow(clippy::needless_range_loop)]
pub fn brute_force_short_cycles(
    g: &MultiGraph,
    l_max: usize,
) -> Result<VertexDisjointCycleSet, VerifyError> {
    let verts: Vec<VertexId> = (0..g.vertex_slots())
        .map(VertexId::from)
        .filter(|&v| g.is_vertex_active(v))
        .collect();
    let n = verts.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(VerifyError::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let local: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Edges between each local pair, lowest ids first.
    let mut between: Vec<Vec<Vec<EdgeId>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..g.edge_slots() {
        let e = EdgeId::from(i);
        if !g.is_edge_active(e) {
            continue;
        }
        let (a, b) = g.endpoints(e);
        let (a, b) = (local[&a], local[&b]);
        between[a][b].push(e);
        if a != b {
            between[b][a].push(e);
        }
    }
    let adjacent = |a: usize, b: usize| !between[a][b].is_empty();

    let full = 1usize << n;
    // path[mask][v]: a simple path from lowest(mask) through all of mask
    // ending at v exists; the value is the predecessor of v (or n for the
    // start itself), or u8::MAX when no such path exists.
    const NONE: u8 = u8::MAX;
    let mut path = vec![[NONE; BRUTE_FORCE_MAX_N]; full];
    for s in 0..n {
        path[1 << s][s] = n as u8;
    }
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        for v in 0..n {
            if path[mask][v] == NONE {
                continue;
            }
            for w in (low + 1)..n {
                if mask & (1 << w) == 0 && adjacent(v, w) {
                    let next = mask | (1 << w);
                    if path[next][w] == NONE {
                        path[next][w] = v as u8;
                    }
                }
            }
        }
    }

    // Witness cycle (local vertex order) for each vertex set that carries one.
    let mut witness: Vec<Option<usize>> = vec![None; full]; // closing endpoint
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        if size > l_max {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let ok_end = match size {
            1 => (!between[low][low].is_empty()).then_some(low),
            2 => {
                let other = (mask & !(1 << low)).trailing_zeros() as usize;
                (between[low][other].len() >= 2).then_some(other)
            }
            _ => (0..n).find(|&v| v != low && path[mask][v] != NONE && adjacent(v, low)),
        };
        witness[mask] = ok_end;
    }

    // best[mask]: maximum coverage using only vertices in mask.
    let mut best = vec![0u8; full];
    let mut choice = vec![0usize; full]; // chosen cycle set containing lowest, or 0 to skip it
    for mask in 1..full {
        let low_bit = mask & mask.wrapping_neg();
        let rest = mask ^ low_bit;
        best[mask] = best[rest];
        choice[mask] = 0;
        let mut sub = rest;
        loop {
            let c = sub | low_bit;
            if witness[c].is_some() {
                let value = c.count_ones() as u8 + best[mask ^ c];
                if value > best[mask] {
                    best[mask] = value;
                    choice[mask] = c;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut out = VertexDisjointCycleSet::new();
    let mut mask = full - 1;
    while mask != 0 {
        let c = choice[mask];
        if c == 0 {
            mask &= mask - 1;
            continue;
        }
        let end = witness[c].expect("chosen sets carry a cycle");
        let low = c.trailing_zeros() as usize;
        let mut order = vec![end];
        let (mut m, mut v) = (c, end);
        while v != low {
            let p = path[m][v] as usize;
            m &= !(1 << v);
            v = p;
            order.push(v);
        }
        order.reverse(); // low ... end
        let k = order.len();
        let edges: Vec<EdgeId> = match k {
            1 => vec![between[low][low][0]],
            2 => vec![between[order[0]][order[1]][0], between[order[0]][order[1]][1]],
            _ => (0..k).map(|i| between[order[i]][order[(i + 1) % k]][0]).collect(),
        };
        out.cycles.push(Cycle {
            vertices: order.iter().map(|&i| verts[i]).collect(),
            edges,
        });
        mask ^= c;
    }
    Ok(out)
}
