//! Undirected multigraph with stable vertex and edge ids.
//!
//! Deletion never compacts storage: removed vertices and edges keep their
//! ids and are only marked inactive, so cycles recorded as edge-id
//! sequences stay meaningful while the graph shrinks underneath them.
//! [`MultiGraph::compact`] produces a fresh, dense graph together with the
//! id maps back to the original.

use std::collections::VecDeque;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl From<usize> for EdgeId {
    fn from(i: usize) -> Self {
        EdgeId(u32::try_from(i).expect("edge index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("vertex {0} has been deleted")]
    InactiveVertex(VertexId),
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(EdgeId),
    #[error("root {0} is not part of the component")]
    RootNotInComponent(VertexId),
    #[error("component is not connected: reached {reached} of {expected} vertices")]
    Disconnected { reached: usize, expected: usize },
    #[error("vertex {0} is not covered by the tree")]
    NotCovered(VertexId),
    #[error("vertex {0} appears in more than one part")]
    OverlappingParts(VertexId),
    #[error("edge {edge} has endpoint {vertex} outside every part")]
    EndpointOutsideParts { edge: EdgeId, vertex: VertexId },
    #[error("part {0} is not a connected piece of the tree")]
    PartNotSubtree(usize),
}

#[derive(Clone, Debug)]
struct EdgeSlot {
    u: VertexId,
    v: VertexId,
    active: bool,
    // Positions inside the incidence lists of `u` and `v`. Equal for loops.
    pos_u: u32,
    pos_v: u32,
}

/// An incidence list stored inside the shared arena.
#[derive(Clone, Copy, Debug, Default)]
struct Span {
    start: u32,
    len: u32,
    cap: u32,
}

fn arena_index(i: usize) -> u32 {
    u32::try_from(i).expect("incidence arena exceeds u32")
}

/// Undirected multigraph allowing parallel edges and self-loops.
///
/// A self-loop is stored once in the incidence list of its vertex and adds
/// two to that vertex's degree.
#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    edges: Vec<EdgeSlot>,
    /// All incidence lists, each a `Span` of this buffer. A list that
    /// outgrows its span moves to the end with doubled capacity.
    arena: Vec<EdgeId>,
    /// `far[i]` is the other endpoint of `arena[i]` (itself for a loop).
    far: Vec<VertexId>,
    lists: Vec<Span>,
    degree: Vec<u32>,
    vertex_active: Vec<bool>,
    active_edges: usize,
    active_vertices: usize,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            edges: Vec::new(),
            arena: Vec::new(),
            far: Vec::new(),
            lists: vec![Span::default(); n],
            degree: vec![0; n],
            vertex_active: vec![true; n],
            active_edges: 0,
            active_vertices: n,
        }
    }

    pub fn with_capacity(n: usize, m: usize) -> Self {
        let mut g = Self::new(n);
        g.edges.reserve(m);
        g
    }

    /// Builds a graph on `n` vertices from an edge list; edge `i` gets id `i`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange(VertexId::from(x)));
                }
            }
            pairs.push((u as u32, v as u32));
        }
        Ok(Self::from_pairs(n, &pairs))
    }

    /// Graph on `n` vertices in which edge `i` joins `pairs[i]`. Endpoints
    /// must be below `n`.
    pub(crate) fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        assert!(2 * pairs.len() <= u32::MAX as usize, "incidence arena exceeds u32");
        let mut degree = vec![0u32; n];
        let mut start = vec![0u32; n + 1];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
            start[u as usize + 1] += 1;
            if u != v {
                start[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let total = start[n] as usize;
        let mut arena = vec![EdgeId(u32::MAX); total];
        let mut far = vec![VertexId(u32::MAX); total];
        let mut fill: Vec<u32> = start[..n].to_vec();
        let mut place = |x: u32, y: u32, e: u32| {
            let at = fill[x as usize];
            fill[x as usize] += 1;
            arena[at as usize] = EdgeId(e);
            far[at as usize] = VertexId(y);
            at - start[x as usize]
        };
        let edges: Vec<EdgeSlot> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                let id = i as u32;
                let pos_u = place(u, v, id);
                let pos_v = if u == v { pos_u } else { place(v, u, id) };
                EdgeSlot {
                    u: VertexId(u),
                    v: VertexId(v),
                    active: true,
                    pos_u,
                    pos_v,
                }
            })
            .collect();
        let lists = (0..n)
            .map(|i| {
                let len = start[i + 1] - start[i];
                Span {
                    start: start[i],
                    len,
                    cap: len,
                }
            })
            .collect();
        MultiGraph {
            active_edges: edges.len(),
            edges,
            arena,
            far,
            lists,
            degree,
            vertex_active: vec![true; n],
            active_vertices: n,
        }
    }

    /// Appends `e`, leading to `y`, to the list of `x` and returns its
    /// position.
    fn push_incident(&mut self, x: VertexId, e: EdgeId, y: VertexId) -> u32 {
        let span = &mut self.lists[x.index()];
        if span.len == span.cap {
            let cap = (span.cap * 2).max(4);
            let start = self.arena.len();
            let old = span.start as usize;
            self.arena.extend_from_within(old..old + span.len as usize);
            self.arena.resize(start + cap as usize, EdgeId(u32::MAX));
            self.far.extend_from_within(old..old + span.len as usize);
            self.far.resize(start + cap as usize, VertexId(u32::MAX));
            span.start = arena_index(start);
            span.cap = cap;
        }
        let pos = span.len;
        self.arena[(span.start + pos) as usize] = e;
        self.far[(span.start + pos) as usize] = y;
        span.len += 1;
        pos
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId::from(self.lists.len());
        self.lists.push(Span::default());
        self.degree.push(0);
        self.vertex_active.push(true);
        self.active_vertices += 1;
        id
    }

    pub fn try_add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        for x in [u, v] {
            if x.index() >= self.lists.len() {
                return Err(GraphError::VertexOutOfRange(x));
            }
            if !self.vertex_active[x.index()] {
                return Err(GraphError::InactiveVertex(x));
            }
        }
        let id = EdgeId::from(self.edges.len());
        let pos_u = self.push_incident(u, id, v);
        let pos_v = if u == v {
            self.degree[u.index()] += 2;
            pos_u
        } else {
            self.degree[u.index()] += 1;
            self.degree[v.index()] += 1;
            self.push_incident(v, id, u)
        };
        self.edges.push(EdgeSlot {
            u,
            v,
            active: true,
            pos_u,
            pos_v,
        });
        self.active_edges += 1;
        Ok(id)
    }

    /// Adds an edge between two active vertices.
    ///
    /// Panics if either endpoint is out of range or deleted.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.try_add_edge(u, v).expect("invalid edge endpoints")
    }

    fn detach(&mut self, x: VertexId, pos: u32) {
        let span = &mut self.lists[x.index()];
        span.len -= 1;
        let last = (span.start + span.len) as usize;
        let at = (span.start + pos) as usize;
        if at != last {
            let moved = self.arena[last];
            self.arena[at] = moved;
            self.far[at] = self.far[last];
            let slot = &mut self.edges[moved.index()];
            if slot.u == x {
                slot.pos_u = pos;
            }
            if slot.v == x {
                slot.pos_v = pos;
            }
        }
    }

    /// Deletes an edge. Returns `false` if it was already inactive.
    pub fn remove_edge(&mut self, e: EdgeId) -> bool {
        let Some(slot) = self.edges.get(e.index()) else {
            return false;
        };
        if !slot.active {
            return false;
        }
        let (u, v, pos_u, pos_v) = (slot.u, slot.v, slot.pos_u, slot.pos_v);
        self.edges[e.index()].active = false;
        self.active_edges -= 1;
        if u == v {
            self.degree[u.index()] -= 2;
            self.detach(u, pos_u);
        } else {
            self.degree[u.index()] -= 1;
            self.degree[v.index()] -= 1;
            self.detach(u, pos_u);
            self.detach(v, pos_v);
        }
        true
    }

    /// Deletes a vertex together with every incident edge.
    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        if !self.is_vertex_active(v) {
            return false;
        }
        while let Some(&e) = self.incident(v).last() {
            self.remove_edge(e);
        }
        self.vertex_active[v.index()] = false;
        self.active_vertices -= 1;
        true
    }

    /// Number of vertex slots, active or not.
    pub fn vertex_slots(&self) -> usize {
        self.lists.len()
    }

    /// Number of edge slots, active or not.
    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.active_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.active_edges
    }

    pub fn is_vertex_active(&self, v: VertexId) -> bool {
        self.vertex_active.get(v.index()).copied().unwrap_or(false)
    }

    pub fn is_edge_active(&self, e: EdgeId) -> bool {
        self.edges.get(e.index()).is_some_and(|s| s.active)
    }

    /// Endpoints of an edge slot (active or not). Panics when out of range.
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let s = &self.edges[e.index()];
        (s.u, s.v)
    }

    /// The endpoint of `e` opposite to `v`; `v` itself for loops.
    #[inline]
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let s = &self.edges[e.index()];
        if s.u == v {
            s.v
        } else {
            s.u
        }
    }

    #[inline]
    pub fn is_loop(&self, e: EdgeId) -> bool {
        let s = &self.edges[e.index()];
        s.u == s.v
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v.index()] as usize
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0) as usize
    }

    /// Active edges incident to `v`, in no guaranteed order.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        let span = self.lists[v.index()];
        &self.arena[span.start as usize..(span.start + span.len) as usize]
    }

    /// Far endpoints matching [`MultiGraph::incident`] entry by entry; a
    /// loop contributes `v` itself.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let span = self.lists[v.index()];
        &self.far[span.start as usize..(span.start + span.len) as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_active
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId::from(i))
    }

    /// Active edge ids in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, s)| s.active)
            .map(|(i, _)| EdgeId::from(i))
    }

    /// Recomputes degrees from incidence lists and checks every cached
    /// counter. Used by tests after mutation sequences.
    pub fn check_invariants(&self) -> bool {
        let mut total = 0usize;
        for i in 0..self.lists.len() {
            let v = VertexId::from(i);
            let list = self.incident(v);
            let mut d = 0u32;
            for (pos, &e) in list.iter().enumerate() {
                let s = &self.edges[e.index()];
                if !s.active {
                    return false;
                }
                if s.u == v && s.pos_u as usize != pos {
                    return false;
                }
                if s.v == v && s.pos_v as usize != pos {
                    return false;
                }
                d += if s.u == s.v { 2 } else { 1 };
            }
            if d != self.degree[i] {
                return false;
            }
            if !self.vertex_active[i] && !list.is_empty() {
                return false;
            }
            total += d as usize;
        }
        let active = self.edges.iter().filter(|s| s.active).count();
        total == 2 * active
            && active == self.active_edges
            && self.vertex_active.iter().filter(|&&a| a).count() == self.active_vertices
    }

    /// Fresh graph with only the active vertices and edges, renumbered
    /// densely in id order.
    pub fn compact(&self) -> Subgraph {
        let mut new_id = vec![u32::MAX; self.vertex_slots()];
        let mut vertex_map = Vec::with_capacity(self.active_vertices);
        for v in self.vertices() {
            new_id[v.index()] = vertex_map.len() as u32;
            vertex_map.push(v);
        }
        let mut pairs = Vec::with_capacity(self.active_edges);
        let mut edge_map = Vec::with_capacity(self.active_edges);
        for e in self.edges() {
            let (u, v) = self.endpoints(e);
            pairs.push((new_id[u.index()], new_id[v.index()]));
            edge_map.push(e);
        }
        let graph = MultiGraph::from_pairs(vertex_map.len(), &pairs);
        Subgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }

    /// Subgraph on every active vertex keeping only the listed edges, which
    /// are renumbered in the order given.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> Subgraph {
        let mut new_id = vec![u32::MAX; self.vertex_slots()];
        let mut vertex_map = Vec::with_capacity(self.active_vertices);
        for v in self.vertices() {
            new_id[v.index()] = vertex_map.len() as u32;
            vertex_map.push(v);
        }
        let pairs: Vec<(u32, u32)> = edges
            .iter()
            .map(|&e| {
                let (u, v) = self.endpoints(e);
                (new_id[u.index()], new_id[v.index()])
            })
            .collect();
        let graph = MultiGraph::from_pairs(vertex_map.len(), &pairs);
        Subgraph {
            graph,
            vertex_map,
            edge_map: edges.to_vec(),
        }
    }

    /// Splits the graph into one subgraph per group.
    ///
    /// `group_of[v]` names the group of each vertex slot (`None` drops the
    /// vertex). An active edge is kept when both endpoints share a group and
    /// `keep(e)` holds. Vertices and edges keep their relative id order.
    pub fn grouped_subgraphs(
        &self,
        group_of: &[Option<u32>],
        groups: usize,
        mut keep: impl FnMut(EdgeId) -> bool,
    ) -> Vec<Subgraph> {
        let mut local = vec![u32::MAX; self.vertex_slots()];
        let mut vertex_maps: Vec<Vec<VertexId>> = vec![Vec::new(); groups];
        for v in self.vertices() {
            if let Some(gid) = group_of[v.index()] {
                let list = &mut vertex_maps[gid as usize];
                local[v.index()] = list.len() as u32;
                list.push(v);
            }
        }
        let mut pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); groups];
        let mut edge_maps: Vec<Vec<EdgeId>> = vec![Vec::new(); groups];
        for e in self.edges() {
            let (u, v) = self.endpoints(e);
            let (Some(gu), Some(gv)) = (group_of[u.index()], group_of[v.index()]) else {
                continue;
            };
            if gu != gv || !keep(e) {
                continue;
            }
            pairs[gu as usize].push((local[u.index()], local[v.index()]));
            edge_maps[gu as usize].push(e);
        }
        let out = vertex_maps
            .into_iter()
            .zip(pairs.iter().zip(edge_maps))
            .map(|(vertex_map, (p, edge_map))| Subgraph {
                graph: MultiGraph::from_pairs(vertex_map.len(), p),
                vertex_map,
                edge_map,
            })
            .collect();
        out
    }
}

/// A graph derived from a parent graph, with maps from its own ids back to
/// the parent's ids.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: MultiGraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

impl Subgraph {
    #[inline]
    pub fn parent_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.index()]
    }

    #[inline]
    pub fn parent_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_map[e.index()]
    }
}

/// Maximal connected vertex sets over the active part of `g`, each sorted,
/// listed in order of their smallest vertex.
pub fn connected_components(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; g.vertex_slots()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in g.vertices() {
        if seen[s.index()] {
            continue;
        }
        seen[s.index()] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(x) = queue.pop_front() {
            comp.push(x);
            for &y in g.neighbors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Rooted spanning tree over a vertex subset, built by BFS.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    order: Vec<VertexId>,
    /// `(vertex, slot)` sorted by vertex.
    slot: Vec<(VertexId, u32)>,
    parent: Vec<Option<(u32, EdgeId)>>,
    depth: Vec<u32>,
}

/// Path between two tree vertices: `vertices.len() == edges.len() + 1`, and
/// `edges[i]` joins `vertices[i]` to `vertices[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl SpanningTree {
    fn from_parts(order: Vec<VertexId>, parent: Vec<Option<(u32, EdgeId)>>, depth: Vec<u32>) -> Self {
        let mut slot: Vec<(VertexId, u32)> = order.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        slot.sort_unstable();
        SpanningTree {
            order,
            slot,
            parent,
            depth,
        }
    }

    /// Single-vertex tree.
    pub fn singleton(root: VertexId) -> Self {
        Self::from_parts(vec![root], vec![None], vec![0])
    }

    /// BFS tree from `root` using only vertices accepted by `in_scope`.
    /// Ties are broken by incidence order.
    pub fn bfs_within(g: &MultiGraph, root: VertexId, in_scope: impl Fn(VertexId) -> bool) -> Self {
        let mut seen = vec![false; g.vertex_slots()];
        Self::bfs_marking(g, root, in_scope, &mut seen)
    }

    /// [`SpanningTree::bfs_within`] that skips and sets `seen` entries, so
    /// one array can serve a sequence of disjoint searches.
    pub(crate) fn bfs_marking(
        g: &MultiGraph,
        root: VertexId,
        in_scope: impl Fn(VertexId) -> bool,
        seen: &mut [bool],
    ) -> Self {
        let mut order = vec![root];
        let mut parent = vec![None];
        let mut depth = vec![0];
        seen[root.index()] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            let dx = depth[head];
            for (&e, &y) in g.incident(x).iter().zip(g.neighbors(x)) {
                if seen[y.index()] || !in_scope(y) {
                    continue;
                }
                seen[y.index()] = true;
                order.push(y);
                parent.push(Some((head as u32, e)));
                depth.push(dx + 1);
            }
            head += 1;
        }
        Self::from_parts(order, parent, depth)
    }

    /// Restrictions of the tree to each part. Every part must be a connected
    /// piece of the tree; its subtree is rooted at its vertex closest to the
    /// root.
    pub fn subtrees(&self, parts: &[Vec<VertexId>]) -> Result<Vec<SpanningTree>, GraphError> {
        let mut part_at = vec![u32::MAX; self.order.len()];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                let s = self.slot_of(v).ok_or(GraphError::NotCovered(v))?;
                if part_at[s] != u32::MAX {
                    return Err(GraphError::OverlappingParts(v));
                }
                part_at[s] = i as u32;
            }
        }
        let mut local = vec![0u32; self.order.len()];
        type Columns = (Vec<VertexId>, Vec<Option<(u32, EdgeId)>>, Vec<u32>);
        let mut built: Vec<Columns> = parts
            .iter()
            .map(|p| (Vec::with_capacity(p.len()), Vec::with_capacity(p.len()), Vec::with_capacity(p.len())))
            .collect();
        // BFS order visits parents before children.
        for (s, &v) in self.order.iter().enumerate() {
            let i = part_at[s];
            if i == u32::MAX {
                continue;
            }
            let (order, parent, depth) = &mut built[i as usize];
            local[s] = order.len() as u32;
            match self.parent[s] {
                Some((ps, e)) if part_at[ps as usize] == i => {
                    let lp = local[ps as usize];
                    parent.push(Some((lp, e)));
                    depth.push(depth[lp as usize] + 1);
                }
                _ if order.is_empty() => {
                    parent.push(None);
                    depth.push(0);
                }
                _ => return Err(GraphError::PartNotSubtree(i as usize)),
            }
            order.push(v);
        }
        Ok(built
            .into_iter()
            .map(|(order, parent, depth)| Self::from_parts(order, parent, depth))
            .collect())
    }

    pub fn root(&self) -> VertexId {
        self.order[0]
    }

    /// Covered vertices in BFS order (root first).
    pub fn vertices(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slot_of(v).is_some()
    }

    pub(crate) fn slot_of(&self, v: VertexId) -> Option<usize> {
        self.slot
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.slot[i].1 as usize)
    }

    pub fn depth(&self, v: VertexId) -> Option<u32> {
        self.slot_of(v).map(|s| self.depth[s])
    }

    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        let s = self.slot_of(v)?;
        self.parent[s].map(|(p, e)| (self.order[p as usize], e))
    }

    /// Parent pointers by slot; slots follow [`SpanningTree::vertices`].
    pub(crate) fn parent_slots(&self) -> &[Option<(u32, EdgeId)>] {
        &self.parent
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Tree edges, one per non-root vertex.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.parent.iter().filter_map(|p| p.map(|(_, e)| e))
    }

    /// Exact diameter of the tree (two BFS sweeps over tree edges).
    pub fn diameter(&self) -> u32 {
        let n = self.order.len();
        if n <= 1 {
            return 0;
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (c, p) in self.parent.iter().enumerate() {
            if let Some((p, _)) = p {
                adj[c].push(*p);
                adj[*p as usize].push(c as u32);
            }
        }
        let sweep = |start: usize| {
            let mut dist = vec![u32::MAX; n];
            dist[start] = 0;
            let mut q = VecDeque::from([start]);
            let mut far = (start, 0);
            while let Some(x) = q.pop_front() {
                if dist[x] > far.1 {
                    far = (x, dist[x]);
                }
                for &y in &adj[x] {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x] + 1;
                        q.push_back(y as usize);
                    }
                }
            }
            far
        };
        let (a, _) = sweep(0);
        sweep(a).1
    }

    /// The unique tree path from `u` to `v`, meeting at their lowest common
    /// ancestor. Empty when `u == v`.
    pub fn tree_path(&self, u: VertexId, v: VertexId) -> Result<TreePath, GraphError> {
        let mut a = self.slot_of(u).ok_or(GraphError::NotCovered(u))?;
        let mut b = self.slot_of(v).ok_or(GraphError::NotCovered(v))?;
        let mut up_vertices = vec![self.order[a]];
        let mut up_edges = Vec::new();
        let mut down_vertices = vec![self.order[b]];
        let mut down_edges = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a].expect("non-root has a parent");
                up_edges.push(e);
                a = p as usize;
                up_vertices.push(self.order[a]);
            } else {
                let (p, e) = self.parent[b].expect("non-root has a parent");
                down_edges.push(e);
                b = p as usize;
                down_vertices.push(self.order[b]);
            }
        }
        // Both sides end at the LCA; keep it once.
        down_vertices.pop();
        up_vertices.extend(down_vertices.into_iter().rev());
        up_edges.extend(down_edges.into_iter().rev());
        Ok(TreePath {
            vertices: up_vertices,
            edges: up_edges,
        })
    }
}

/// BFS spanning tree of a connected vertex set.
pub fn bfs_spanning_tree(
    g: &MultiGraph,
    component: &[VertexId],
    root: VertexId,
) -> Result<SpanningTree, GraphError> {
    let mut member = vec![false; g.vertex_slots()];
    for &v in component {
        if v.index() >= g.vertex_slots() {
            return Err(GraphError::VertexOutOfRange(v));
        }
        member[v.index()] = true;
    }
    if !member.get(root.index()).copied().unwrap_or(false) {
        return Err(GraphError::RootNotInComponent(root));
    }
    let tree = SpanningTree::bfs_within(g, root, |v| member[v.index()]);
    let expected = member.iter().filter(|&&m| m).count();
    if tree.len() != expected {
        return Err(GraphError::Disconnected {
            reached: tree.len(),
            expected,
        });
    }
    Ok(tree)
}

/// Result of contracting vertex parts into single vertices.
#[derive(Clone, Debug)]
pub struct ContractionMap {
    pub parts: Vec<Vec<VertexId>>,
    /// Part index of each vertex slot of the source graph.
    pub part_of: Vec<Option<u32>>,
    /// Contracted graph; vertex `i` stands for `parts[i]`. Vertices beyond
    /// `parts.len()` are isolated padding.
    pub h: MultiGraph,
    /// Edge injection: `f[h_edge]` is the source edge it came from.
    pub f: Vec<EdgeId>,
}

impl ContractionMap {
    pub fn part(&self, v: VertexId) -> Option<usize> {
        self.part_of.get(v.index()).copied().flatten().map(|p| p as usize)
    }

    #[inline]
    pub fn injection(&self, h_edge: EdgeId) -> EdgeId {
        self.f[h_edge.index()]
    }

    /// Adds isolated vertices to `h` until it has `n` vertices.
    pub fn pad_to(&mut self, n: usize) {
        while self.h.vertex_slots() < n {
            self.h.add_vertex();
        }
    }
}

/// Contracts each part to a single vertex.
///
/// Every active edge of `g` not listed in `exclude` becomes one edge of the
/// contracted graph (a self-loop when both endpoints share a part). Edges are
/// added in increasing id order.
pub fn contract(
    g: &MultiGraph,
    parts: &[Vec<VertexId>],
    exclude: &[EdgeId],
) -> Result<ContractionMap, GraphError> {
    let mut part_of: Vec<Option<u32>> = vec![None; g.vertex_slots()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if v.index() >= g.vertex_slots() {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if !g.is_vertex_active(v) {
                return Err(GraphError::InactiveVertex(v));
            }
            if part_of[v.index()].replace(i as u32).is_some() {
                return Err(GraphError::OverlappingParts(v));
            }
        }
    }
    let mut excluded = vec![false; g.edge_slots()];
    for &e in exclude {
        if e.index() >= g.edge_slots() {
            return Err(GraphError::EdgeOutOfRange(e));
        }
        excluded[e.index()] = true;
    }
    let mut pairs = Vec::with_capacity(g.edge_count());
    let mut f = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        if excluded[e.index()] {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let pu = part_of[u.index()].ok_or(GraphError::EndpointOutsideParts { edge: e, vertex: u })?;
        let pv = part_of[v.index()].ok_or(GraphError::EndpointOutsideParts { edge: e, vertex: v })?;
        pairs.push((pu, pv));
        f.push(e);
    }
    let h = MultiGraph::from_pairs(parts.len(), &pairs);
    Ok(ContractionMap {
        parts: parts.to_vec(),
        part_of,
        h,
        f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn self_loop_counts_twice() {
        let mut g = MultiGraph::new(2);
        g.add_edge(v(0), v(0));
        g.add_edge(v(0), v(1));
        assert_eq!(g.degree(v(0)), 3);
        assert_eq!(g.degree(v(1)), 1);
        assert_eq!(g.incident(v(0)).len(), 2);
        assert!(g.check_invariants());
    }

    #[test]
    fn components_of_empty_graph() {
        assert!(connected_components(&MultiGraph::new(0)).is_empty());
    }

    #[test]
    fn components_of_two_triangles() {
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn components_after_deletion() {
        let mut g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        g.remove_edge(EdgeId(0));
        assert_eq!(connected_components(&g), vec![vec![v(0)], vec![v(1), v(2)]]);
    }

    #[test]
    fn bfs_tree_on_star_and_cycle() {
        let star = MultiGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let all: Vec<_> = star.vertices().collect();
        let t = bfs_spanning_tree(&star, &all, v(0)).unwrap();
        assert_eq!(t.max_depth(), 1);
        assert_eq!(t.diameter(), 2);

        let c6 = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let all: Vec<_> = c6.vertices().collect();
        for r in 0..6 {
            assert_eq!(bfs_spanning_tree(&c6, &all, v(r)).unwrap().max_depth(), 3);
        }
    }

    #[test]
    fn bfs_tree_singleton_and_errors() {
        let g = MultiGraph::new(3);
        let t = bfs_spanning_tree(&g, &[v(1)], v(1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.diameter(), 0);
        assert_eq!(
            bfs_spanning_tree(&g, &[v(1)], v(2)).unwrap_err(),
            GraphError::RootNotInComponent(v(2))
        );
        assert!(matches!(
            bfs_spanning_tree(&g, &[v(0), v(1)], v(0)),
            Err(GraphError::Disconnected { .. })
        ));
    }

    #[test]
    fn tree_paths() {
        let path = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = bfs_spanning_tree(&path, &[v(0), v(1), v(2)], v(1)).unwrap();
        let p = t.tree_path(v(0), v(2)).unwrap();
        assert_eq!(p.vertices, vec![v(0), v(1), v(2)]);
        assert_eq!(p.edges, vec![EdgeId(0), EdgeId(1)]);
        assert!(t.tree_path(v(2), v(2)).unwrap().is_empty());

        let star = MultiGraph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let t = bfs_spanning_tree(&star, &[v(0), v(1), v(2)], v(0)).unwrap();
        let p = t.tree_path(v(1), v(2)).unwrap();
        assert_eq!(p.vertices, vec![v(1), v(0), v(2)]);
        assert_eq!(p.len(), 2);
        assert_eq!(t.tree_path(v(1), VertexId(9)), Err(GraphError::NotCovered(VertexId(9))));
    }

    #[test]
    fn contract_triangle() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let cm = contract(&g, &[vec![v(0), v(1)], vec![v(2)]], &[EdgeId(0)]).unwrap();
        assert_eq!(cm.h.vertex_count(), 2);
        assert_eq!(cm.h.edge_count(), 2);
        for e in cm.h.edges() {
            let (a, b) = cm.h.endpoints(e);
            assert_eq!((a.min(b), a.max(b)), (v(0), v(1)));
        }
        assert_eq!(cm.f, vec![EdgeId(1), EdgeId(2)]);
    }

    #[test]
    fn contract_parallel_edges_to_loops() {
        let g = MultiGraph::from_edges(2, &[(0, 1); 4]).unwrap();
        let cm = contract(&g, &[vec![v(0), v(1)]], &[EdgeId(2)]).unwrap();
        assert_eq!(cm.h.vertex_count(), 1);
        assert_eq!(cm.h.edge_count(), 3);
        assert!(cm.h.edges().all(|e| cm.h.is_loop(e)));
    }

    #[test]
    fn contract_rejects_uncovered_endpoint() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let err = contract(&g, &[vec![v(0), v(1)]], &[]).unwrap_err();
        assert_eq!(err, GraphError::EndpointOutsideParts { edge: EdgeId(1), vertex: v(2) });
        assert_eq!(
            contract(&g, &[vec![v(0)], vec![v(0), v(1), v(2)]], &[]).unwrap_err(),
            GraphError::OverlappingParts(v(0))
        );
    }

    #[test]
    fn grouped_subgraphs_keep_intra_group_edges() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 3)]).unwrap();
        let subs = g.grouped_subgraphs(&[Some(0), Some(0), Some(1), Some(1)], 2, |_| true);
        assert_eq!(subs[0].edge_map, vec![EdgeId(0)]);
        assert_eq!(subs[1].edge_map, vec![EdgeId(2), EdgeId(3)]);
        assert_eq!(subs[1].vertex_map, vec![v(2), v(3)]);
        assert_eq!(subs[1].graph.degree(VertexId(1)), 3);
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..12).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..40)))
    }

    proptest! {
        #[test]
        fn degree_invariant_survives_mutation(
            (n, edges) in arb_graph(),
            ops in prop::collection::vec((any::<bool>(), any::<u16>()), 0..60),
        ) {
            let mut g = MultiGraph::from_edges(n, &edges).unwrap();
            for (del_vertex, x) in ops {
                if del_vertex {
                    g.remove_vertex(VertexId(x as u32 % n as u32));
                } else if g.edge_slots() > 0 {
                    g.remove_edge(EdgeId(x as u32 % g.edge_slots() as u32));
                }
                prop_assert!(g.check_invariants());
            }
            let sub = g.compact();
            prop_assert_eq!(sub.graph.edge_count(), g.edge_count());
            prop_assert!(sub.graph.check_invariants());
        }

        #[test]
        fn contraction_conserves_edges((n, edges) in arb_graph(), cut in 1usize..6, drop in 0usize..5) {
            let g = MultiGraph::from_edges(n, &edges).unwrap();
            let parts: Vec<Vec<VertexId>> = (0..n)
                .collect::<Vec<_>>()
                .chunks(cut)
                .map(|c| c.iter().map(|&i| VertexId::from(i)).collect())
                .collect();
            let exclude: Vec<EdgeId> = g.edges().take(drop).collect();
            let cm = contract(&g, &parts, &exclude).unwrap();
            prop_assert_eq!(cm.h.edge_count() + exclude.len(), g.edge_count());
            for h in cm.h.edges() {
                let (a, b) = cm.h.endpoints(h);
                let (x, y) = g.endpoints(cm.injection(h));
                let (px, py) = (cm.part(x).unwrap() as u32, cm.part(y).unwrap() as u32);
                prop_assert!((px, py) == (a.0, b.0) || (py, px) == (a.0, b.0));
            }
        }

        #[test]
        fn bfs_depth_within_diameter((n, edges) in arb_graph()) {
            let g = MultiGraph::from_edges(n, &edges).unwrap();
            for comp in connected_components(&g) {
                let t = bfs_spanning_tree(&g, &comp, comp[0]).unwrap();
                prop_assert_eq!(t.len(), comp.len());
                let diam = crate::verification::measure_diameter(&g, &comp).unwrap();
                prop_assert!(t.max_depth() <= diam);
                prop_assert!(t.diameter() <= 2 * t.max_depth());
            }
        }
    }
}
