//! The layered cycle-finding algorithms and the driver that turns them into
//! a full short cycle decomposition.
//!
//! * [`one_round_short_cycle`] finds cycles in one low-diameter piece by
//!   tree splitting, contraction and short cycles of the contracted graph.
//! * [`improved_short_cycle`] repeats low-diameter decomposition plus one
//!   round per piece until enough vertices are covered.
//! * [`short_cycle_decomp`] recurses on sparsified contractions `c − 1`
//!   times before falling back to [`improved_short_cycle`].
//! * [`decompose`] repeatedly peels `20n` edges, reduces their degree and
//!   extracts cycles until at most `20n` edges remain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ldd::{low_diam_decomp, LddError, LddParams, LddResult};
use crate::multigraph::{contract, ContractionMap, EdgeId, GraphError, MultiGraph, SpanningTree, VertexId};
use crate::primitives::{
    graph_reduce, naive_short_cycle, pull_up, sparsify, split_circuit, tree_split, Cycle, LabeledTree,
    PrimitiveError, VertexDisjointCycleSet,
};
use crate::ratio::Ratio;

/// Consecutive rounds without a new cycle before a loop gives up.
pub const STALL_ROUNDS: u32 = 3;

/// Knobs of a decomposition run. Deserializes from a table in which every
/// field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Recursion depth parameter; cycle lengths grow like `(log n)^c`.
    pub c: u32,
    pub seed: u64,
    pub beta: Ratio,
    /// Each call must cover `m / (divisor · Δ)` vertices.
    pub vertex_target_divisor: u64,
    /// Graphs with at most this many vertices go straight to the naive finder.
    pub small_n_cutoff: usize,
    pub ldd_diam_constant: f64,
    pub ldd_max_retries: u32,
    /// Overrides the per-call round limits (`100·⌈√n⌉` for the improved
    /// loop, `100·k` per recursion level).
    pub max_round_budget: Option<u64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            c: 1,
            seed: 0,
            beta: Ratio::new(1, 12),
            vertex_target_divisor: 10,
            small_n_cutoff: 100,
            ldd_diam_constant: 4.0,
            ldd_max_retries: 20,
            max_round_budget: None,
        }
    }
}

impl EngineConfig {
    pub fn new(c: u32, seed: u64) -> Self {
        EngineConfig {
            c,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |why: &str| Err(EngineError::InvalidConfig(why.to_string()));
        if self.c == 0 {
            return bad("c must be at least 1");
        }
        if self.beta.num() == 0 || self.beta.num() > self.beta.den() {
            return bad("beta must lie in (0, 1]");
        }
        if self.vertex_target_divisor == 0 {
            return bad("vertex_target_divisor must be positive");
        }
        if !(self.ldd_diam_constant.is_finite() && self.ldd_diam_constant > 0.0) {
            return bad("ldd_diam_constant must be positive");
        }
        if self.max_round_budget == Some(0) {
            return bad("max_round_budget must be positive");
        }
        Ok(())
    }

    fn ldd_params(&self) -> LddParams {
        LddParams {
            beta: self.beta,
            diam_constant: self.ldd_diam_constant,
            max_retries: self.ldd_max_retries,
        }
    }

    /// `k = ⌊n̂^{1/(c+1)}⌋`, at least 2.
    pub fn split_size(&self, n_hat: usize) -> usize {
        let e = self.c + 1;
        let fits = |k: usize| (k as u128).checked_pow(e).is_some_and(|p| p <= n_hat as u128);
        let mut k = 1usize;
        while fits(k + 1) {
            k += 1;
        }
        k.max(2)
    }
}

/// Counters for one recursion level, summed over all calls at that level.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LevelStats {
    pub level: u32,
    /// Edges present at the start of each round, summed.
    pub edges_processed: u64,
    pub rounds: u64,
    pub ldd_retries: u64,
    pub cycles_found: u64,
    /// Largest `Δ(H′)/Δ` over the sparsified graphs passed to the next level.
    pub max_degree_ratio: f64,
    /// Calls at this level that ended without meeting their vertex target.
    pub incomplete_calls: u64,
}

/// Edge-disjoint cycles plus the edges left over.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Cycle>,
    pub leftover: Vec<EdgeId>,
    pub source_m: usize,
    pub source_n: usize,
    pub levels: Vec<LevelStats>,
}

impl CycleDecomposition {
    pub fn max_cycle_length(&self) -> usize {
        self.cycles.iter().map(Cycle::len).max().unwrap_or(0)
    }
}

/// Why a loop stopped before reaching its vertex target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shortfall {
    BudgetExhausted { rounds: u64 },
    Stalled { rounds: u64 },
    BelowTarget { covered: usize, target_m: usize, delta: usize },
}

#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("input must have exactly 10n edges (n = {n}, m = {m})")]
    NotTenN { n: usize, m: usize },
    #[error("recursion depth {d} is outside [0, {c})")]
    BadDepth { d: u32, c: u32 },
    #[error("input graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Ldd(#[from] LddError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("stopped early ({reason:?}) with {} cycles", partial.len())]
    Incomplete {
        reason: Shortfall,
        partial: VertexDisjointCycleSet,
    },
    #[error("decomposition aborted: {cause}")]
    Aborted {
        cause: Box<EngineError>,
        partial: Box<CycleDecomposition>,
    },
}

impl From<GraphError> for EngineError {
    fn from(e: GraphError) -> Self {
        EngineError::Primitive(e.into())
    }
}

/// SplitMix64 finalizer of `a` combined with a hashed `b`; used to derive
/// independent seeds (`mix64(base, index)`).
pub fn mix64(a: u64, b: u64) -> u64 {
    fn finalize(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    finalize(a ^ finalize(b.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

/// Mutable state shared by every call of one run.
struct Run<'a> {
    cfg: &'a EngineConfig,
    draws: u64,
    levels: Vec<LevelStats>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a EngineConfig) -> Self {
        Run {
            cfg,
            draws: 0,
            levels: Vec::new(),
        }
    }

    fn level(&mut self, d: u32) -> &mut LevelStats {
        while self.levels.len() <= d as usize {
            let level = self.levels.len() as u32;
            self.levels.push(LevelStats {
                level,
                ..LevelStats::default()
            });
        }
        &mut self.levels[d as usize]
    }

    fn ldd(&mut self, g: &MultiGraph, d: u32) -> Result<LddResult, EngineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(self.cfg.seed, self.draws));
        self.draws += 1;
        let r = low_diam_decomp(g, &self.cfg.ldd_params(), &mut rng)?;
        self.level(d).ldd_retries += u64::from(r.retries());
        Ok(r)
    }

    fn meets_target(&self, covered: usize, m: usize, delta: usize) -> bool {
        covered as u128 * self.cfg.vertex_target_divisor as u128 * delta as u128 >= m as u128
    }
}

fn ceil_sqrt(m: usize) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r * r > m as u64 {
        r -= 1;
    }
    while r * r < m as u64 {
        r += 1;
    }
    r
}

fn check_ten_n(g: &MultiGraph) -> Result<(), EngineError> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if m != 10 * n {
        return Err(EngineError::NotTenN { n, m });
    }
    Ok(())
}

/// Vertex-disjoint cycles in a connected graph of small diameter.
///
/// Splits a BFS tree into connected parts of degree mass close to `4√m`,
/// contracts the parts, takes disjoint parallel pairs and then self-loops of
/// the contracted graph, and expands them back through the part trees.
///
/// The contracted graph is only scanned, never built: part `i` is paired
/// with the smallest unused `j > i` joined by two non-tree edges (the two
/// lowest ids), and a leftover part takes its lowest internal non-tree edge
/// as a self-loop.
pub fn one_round_short_cycle(
    g: &MultiGraph,
    _cfg: &EngineConfig,
) -> Result<VertexDisjointCycleSet, EngineError> {
    let Some(root) = g.vertices().next() else {
        return Ok(VertexDisjointCycleSet::new());
    };
    let tree = SpanningTree::bfs_within(g, root, |_| true);
    if tree.len() != g.vertex_count() {
        return Err(EngineError::Disconnected);
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(VertexDisjointCycleSet::new());
    }
    let threshold = 4 * ceil_sqrt(m);
    let labeled = LabeledTree::new(tree, |v| g.degree(v) as u64);
    let parts = if labeled.total() < threshold {
        vec![labeled.tree.vertices().to_vec()]
    } else {
        tree_split(&labeled, threshold)?
    };
    let trees = labeled.tree.subtrees(&parts)?;
    let mut tree_edge = vec![false; g.edge_slots()];
    for e in trees.iter().flat_map(|t| t.edges()) {
        tree_edge[e.index()] = true;
    }
    let mut part_of: Vec<Option<u32>> = vec![None; g.vertex_slots()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v.index()] = Some(i as u32);
        }
    }

    let p = parts.len();
    let none = EdgeId(u32::MAX);
    let mut used = vec![false; p];
    let mut own_loop = vec![none; p];
    let mut pairs: Vec<(usize, usize, EdgeId, EdgeId)> = Vec::new();
    // Per neighbor part j of the current part: stamp, edge count and the
    // two lowest edge ids seen.
    let mut stamp = vec![u32::MAX; p];
    let mut count = vec![0u32; p];
    let mut low = vec![(none, none); p];
    for i in 0..p {
        if used[i] {
            continue;
        }
        let mut pick: Option<usize> = None;
        for &v in &parts[i] {
            for (&e, &y) in g.incident(v).iter().zip(g.neighbors(v)) {
                if tree_edge[e.index()] {
                    continue;
                }
                let j = part_of[y.index()].expect("parts cover g") as usize;
                if j == i {
                    own_loop[i] = own_loop[i].min(e);
                    continue;
                }
                if j < i || used[j] {
                    continue;
                }
                if stamp[j] != i as u32 {
                    stamp[j] = i as u32;
                    count[j] = 0;
                    low[j] = (none, none);
                }
                count[j] += 1;
                let l = &mut low[j];
                if e < l.0 {
                    *l = (e, l.0);
                } else if e < l.1 {
                    l.1 = e;
                }
                if count[j] >= 2 && pick.is_none_or(|q| j < q) {
                    pick = Some(j);
                }
            }
        }
        if let Some(j) = pick {
            used[i] = true;
            used[j] = true;
            pairs.push((i, j, low[j].0, low[j].1));
        }
    }

    // The chosen contracted edges, numbered in selection order.
    let mut h = MultiGraph::new(p);
    let mut f = Vec::new();
    let mut chosen = VertexDisjointCycleSet::new();
    for &(i, j, e1, e2) in &pairs {
        let (vi, vj) = (VertexId::from(i), VertexId::from(j));
        let h1 = h.add_edge(vi, vj);
        let h2 = h.add_edge(vi, vj);
        f.extend([e1, e2]);
        chosen.cycles.push(Cycle {
            vertices: vec![vi, vj],
            edges: vec![h1, h2],
        });
    }
    for (i, &e) in own_loop.iter().enumerate() {
        if used[i] || e == none {
            continue;
        }
        let vi = VertexId::from(i);
        let he = h.add_edge(vi, vi);
        f.push(e);
        chosen.cycles.push(Cycle {
            vertices: vec![vi],
            edges: vec![he],
        });
    }
    let cm = ContractionMap { parts, part_of, h, f };
    Ok(pull_up(g, &cm, &trees, &chosen)?)
}

/// Runs `find` on every selected cluster that contains a cycle and maps the
/// cycles back into `g`.
///
/// Clusters are connected, so one with fewer edges than vertices is a tree
/// and is skipped.
fn per_cluster(
    g: &MultiGraph,
    ldd: &LddResult,
    mut select: impl FnMut(usize) -> bool,
    mut find: impl FnMut(&MultiGraph) -> Result<VertexDisjointCycleSet, EngineError>,
) -> Result<VertexDisjointCycleSet, EngineError> {
    let mut inner = vec![0usize; ldd.clusters.len()];
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        match (ldd.cluster_of[u.index()], ldd.cluster_of[v.index()]) {
            (Some(a), Some(b)) if a == b => inner[a as usize] += 1,
            _ => {}
        }
    }
    let mut group = vec![None; ldd.clusters.len()];
    let mut groups = 0u32;
    for (i, cluster) in ldd.clusters.iter().enumerate() {
        if inner[i] >= cluster.len() && select(i) {
            group[i] = Some(groups);
            groups += 1;
        }
    }
    let group_of: Vec<Option<u32>> = ldd.cluster_of.iter().map(|c| c.and_then(|c| group[c as usize])).collect();
    let subs = g.grouped_subgraphs(&group_of, groups as usize, |_| true);
    let mut out = VertexDisjointCycleSet::new();
    for sub in &subs {
        let found = find(&sub.graph)?;
        out.cycles.extend(
            found
                .cycles
                .iter()
                .map(|c| c.map(|v| sub.parent_vertex(v), |e| sub.parent_edge(e))),
        );
    }
    Ok(out)
}

/// Shared loop skeleton: repeat `round` on the remaining graph, deleting
/// covered vertices, until `m/(divisor·Δ)` vertices are covered.
struct Progress {
    m0: usize,
    delta0: usize,
    budget: u64,
    rounds: u64,
    idle: u32,
    found: VertexDisjointCycleSet,
    covered: usize,
}

impl Progress {
    fn new(g: &MultiGraph, budget: u64) -> Self {
        Progress {
            m0: g.edge_count(),
            delta0: g.max_degree(),
            budget,
            rounds: 0,
            idle: 0,
            found: VertexDisjointCycleSet::new(),
            covered: 0,
        }
    }

    fn done(&self, run: &Run) -> bool {
        run.meets_target(self.covered, self.m0, self.delta0)
    }

    /// Starts a round, or reports why no further round may run.
    fn begin_round(&mut self, work: &MultiGraph) -> Result<(), Shortfall> {
        if work.edge_count() == 0 || self.idle >= STALL_ROUNDS {
            return Err(Shortfall::Stalled { rounds: self.rounds });
        }
        if self.rounds >= self.budget {
            return Err(Shortfall::BudgetExhausted { rounds: self.rounds });
        }
        self.rounds += 1;
        Ok(())
    }

    fn absorb(&mut self, work: &mut MultiGraph, set: VertexDisjointCycleSet) {
        if set.is_empty() {
            self.idle += 1;
        } else {
            self.idle = 0;
        }
        for v in set.used_vertices() {
            work.remove_vertex(v);
        }
        self.covered += set.total_vertices();
        self.found.extend(set);
    }

    fn finish(self, run: &mut Run, d: u32, stopped: Option<Shortfall>) -> Result<VertexDisjointCycleSet, EngineError> {
        let met = self.done(run);
        let stats = run.level(d);
        stats.cycles_found += self.found.len() as u64;
        if met {
            return Ok(self.found);
        }
        stats.incomplete_calls += 1;
        Err(EngineError::Incomplete {
            reason: stopped.unwrap_or(Shortfall::BelowTarget {
                covered: self.covered,
                target_m: self.m0,
                delta: self.delta0,
            }),
            partial: self.found,
        })
    }
}

/// Partial results of a sub-call that stopped early are kept; anything else
/// is a hard failure.
fn salvage(r: Result<VertexDisjointCycleSet, EngineError>) -> Result<VertexDisjointCycleSet, EngineError> {
    match r {
        Ok(set) | Err(EngineError::Incomplete { partial: set, .. }) => Ok(set),
        Err(e) => Err(e),
    }
}

fn improved_inner(run: &mut Run, g: &MultiGraph, d: u32) -> Result<VertexDisjointCycleSet, EngineError> {
    let n0 = g.vertex_count();
    let budget = run.cfg.max_round_budget.unwrap_or(100 * ceil_sqrt(n0).max(1));
    let mut p = Progress::new(g, budget);
    let mut work = g.clone();
    let mut stopped = None;
    while !p.done(run) {
        if work.vertex_count() <= run.cfg.small_n_cutoff {
            let set = naive_short_cycle(&work);
            run.level(d).rounds += 1;
            p.absorb(&mut work, set);
            break;
        }
        if let Err(why) = p.begin_round(&work) {
            stopped = Some(why);
            break;
        }
        let stats = run.level(d);
        stats.rounds += 1;
        stats.edges_processed += work.edge_count() as u64;
        let ldd = run.ldd(&work, d)?;
        let cfg = run.cfg;
        let set = per_cluster(&work, &ldd, |_| true, |piece| one_round_short_cycle(piece, cfg))?;
        p.absorb(&mut work, set);
    }
    p.finish(run, d, stopped)
}

/// Vertex-disjoint cycles of length `O(log n)` covering at least
/// `m/(10Δ)` vertices of a graph with exactly `10n` edges.
pub fn improved_short_cycle(g: &MultiGraph, cfg: &EngineConfig) -> Result<VertexDisjointCycleSet, EngineError> {
    cfg.validate()?;
    check_ten_n(g)?;
    improved_short_cycle_with_stats(g, cfg).0
}

/// [`improved_short_cycle`] without the `10n` check, also returning the
/// per-level counters.
pub fn improved_short_cycle_with_stats(
    g: &MultiGraph,
    cfg: &EngineConfig,
) -> (Result<VertexDisjointCycleSet, EngineError>, Vec<LevelStats>) {
    let mut run = Run::new(cfg);
    let r = improved_inner(&mut run, g, 0);
    (r, run.levels)
}

fn scd_inner(run: &mut Run, g: &MultiGraph, d: u32, k: usize) -> Result<VertexDisjointCycleSet, EngineError> {
    if d + 1 >= run.cfg.c {
        return improved_inner(run, g, d);
    }
    let n0 = g.vertex_count();
    let budget = run.cfg.max_round_budget.unwrap_or(100 * k as u64);
    let mut p = Progress::new(g, budget);
    let mut work = g.clone();
    let mut stopped = None;
    while !p.done(run) {
        if let Err(why) = p.begin_round(&work) {
            stopped = Some(why);
            break;
        }
        let stats = run.level(d);
        stats.rounds += 1;
        stats.edges_processed += work.edge_count() as u64;
        let ldd = run.ldd(&work, d)?;
        let small: Vec<bool> = ldd.clusters.iter().map(|c| c.len() <= k).collect();
        let small_edges: usize = {
            let mut count = 0;
            for e in work.edges() {
                let (u, v) = work.endpoints(e);
                let cu = ldd.cluster_of[u.index()];
                if cu == ldd.cluster_of[v.index()] && small[cu.expect("active") as usize] {
                    count += 1;
                }
            }
            count
        };
        let set = if 4 * small_edges >= work.edge_count() {
            per_cluster(&work, &ldd, |i| small[i], |piece| Ok(naive_short_cycle(piece)))?
        } else {
            big_clusters_round(run, &work, &ldd, &small, d, k, n0)?
        };
        p.absorb(&mut work, set);
    }
    p.finish(run, d, stopped)
}

/// Contracts the large clusters into parts of degree mass about `k`,
/// sparsifies, recurses one level down and pulls the cycles back.
fn big_clusters_round(
    run: &mut Run,
    work: &MultiGraph,
    ldd: &LddResult,
    small: &[bool],
    d: u32,
    k: usize,
    n0: usize,
) -> Result<VertexDisjointCycleSet, EngineError> {
    let group_of: Vec<Option<u32>> = ldd
        .cluster_of
        .iter()
        .map(|c| c.filter(|&c| !small[c as usize]).map(|_| 0))
        .collect();
    let cluster_of = &ldd.cluster_of;
    let gb = work
        .grouped_subgraphs(&group_of, 1, |e| {
            let (u, v) = work.endpoints(e);
            cluster_of[u.index()] == cluster_of[v.index()]
        })
        .pop()
        .expect("one group");
    let b = &gb.graph;

    // Clusters of G_B in order of their smallest vertex.
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    let mut trees: Vec<SpanningTree> = Vec::new();
    let mut seen = vec![false; b.vertex_slots()];
    for root in b.vertices() {
        if seen[root.index()] {
            continue;
        }
        let tree = SpanningTree::bfs_marking(b, root, |_| true, &mut seen);
        let labeled = LabeledTree::new(tree, |v| b.degree(v) as u64);
        if labeled.total() < k as u64 {
            // Only possible for clusters of at most k vertices.
            continue;
        }
        let pieces = tree_split(&labeled, k as u64)?;
        trees.extend(labeled.tree.subtrees(&pieces)?);
        parts.extend(pieces);
    }
    let excluded: Vec<EdgeId> = trees.iter().flat_map(|t| t.edges()).collect();
    let mut cm = contract(b, &parts, &excluded)?;
    let n_next = 20 * n0 / k;
    debug_assert!(parts.len() <= n_next);
    cm.pad_to(n_next);
    let m_next = (10 * n_next).min(cm.h.edge_count());
    if m_next == 0 {
        return Ok(VertexDisjointCycleSet::new());
    }
    let sparse = sparsify(&cm.h, m_next)?.compact();
    let h_next = &sparse.graph;
    debug_assert_eq!(h_next.vertex_count(), n_next);
    debug_assert_eq!(h_next.edge_count(), m_next);
    let delta = work.max_degree().max(1);
    let ratio = h_next.max_degree() as f64 / delta as f64;
    let stats = run.level(d);
    stats.max_degree_ratio = stats.max_degree_ratio.max(ratio);

    let found = salvage(scd_inner(run, h_next, d + 1, k))?;
    let in_h = VertexDisjointCycleSet {
        cycles: found
            .cycles
            .iter()
            .map(|c| c.map(|v| sparse.parent_vertex(v), |e| sparse.parent_edge(e)))
            .collect(),
    };
    let lifted = pull_up(b, &cm, &trees, &in_h)?;
    Ok(VertexDisjointCycleSet {
        cycles: lifted
            .cycles
            .iter()
            .map(|c| c.map(|v| gb.parent_vertex(v), |e| gb.parent_edge(e)))
            .collect(),
    })
}

/// Vertex-disjoint cycles of length `O(log n̂)^{c−d}` covering at least
/// `m/(10Δ)` vertices of a graph with exactly `10n` edges. `k` is the split
/// size fixed at the top of the recursion.
pub fn short_cycle_decomp(
    g: &MultiGraph,
    d: u32,
    cfg: &EngineConfig,
    k: usize,
) -> Result<VertexDisjointCycleSet, EngineError> {
    cfg.validate()?;
    check_ten_n(g)?;
    if d >= cfg.c {
        return Err(EngineError::BadDepth { d, c: cfg.c });
    }
    if k < 2 {
        return Err(EngineError::InvalidConfig("k must be at least 2".into()));
    }
    short_cycle_decomp_with_stats(g, d, cfg, k).0
}

/// [`short_cycle_decomp`] without argument checks, also returning the
/// per-level counters.
pub fn short_cycle_decomp_with_stats(
    g: &MultiGraph,
    d: u32,
    cfg: &EngineConfig,
    k: usize,
) -> (Result<VertexDisjointCycleSet, EngineError>, Vec<LevelStats>) {
    let mut run = Run::new(cfg);
    let r = scd_inner(&mut run, g, d, k);
    (r, run.levels)
}

/// Edge-disjoint short cycles of `g` leaving at most `20n` edges uncovered.
///
/// While more than `20n` edges remain, the `20n` lowest-id edges are
/// reduced to a `2n`-vertex graph of bounded degree, cycles are found there
/// with [`short_cycle_decomp`], and each becomes one or more cycles of `g`
/// after splitting the corresponding circuit.
pub fn decompose(g: &MultiGraph, cfg: &EngineConfig) -> Result<CycleDecomposition, EngineError> {
    cfg.validate()?;
    let n = g.vertex_count();
    let mut out = CycleDecomposition {
        source_m: g.edge_count(),
        source_n: n,
        ..CycleDecomposition::default()
    };
    let mut run = Run::new(cfg);
    let mut work = g.clone();
    let k = cfg.split_size(2 * n);
    let mut failure: Option<EngineError> = None;

    while work.edge_count() > 20 * n {
        let batch: Vec<EdgeId> = work.edges().take(20 * n).collect();
        let sub = work.edge_subgraph(&batch);
        let mut red = graph_reduce(&sub.graph)?;
        red.pad_to(2 * n);
        let (found, err) = match scd_inner(&mut run, &red.h, 0, k) {
            Ok(set) => (set, None),
            Err(EngineError::Incomplete { reason, partial }) => (
                partial.clone(),
                Some(EngineError::Incomplete { reason, partial }),
            ),
            Err(e) => (VertexDisjointCycleSet::new(), Some(e)),
        };
        let before = out.cycles.len();
        for c in &found.cycles {
            let Some(start) = red.origin_of(c.vertices[0]) else {
                continue;
            };
            let edges: Vec<EdgeId> = c
                .edges
                .iter()
                .map(|&e| sub.parent_edge(red.origin_edge[e.index()]))
                .collect();
            let pieces = split_circuit(&work, sub.parent_vertex(start), &edges)?;
            for piece in &pieces {
                for &e in &piece.edges {
                    work.remove_edge(e);
                }
            }
            out.cycles.extend(pieces);
        }
        if out.cycles.len() == before {
            failure = Some(err.unwrap_or(EngineError::Incomplete {
                reason: Shortfall::Stalled { rounds: 0 },
                partial: VertexDisjointCycleSet::new(),
            }));
            break;
        }
    }

    out.leftover = work.edges().collect();
    out.levels = run.levels;
    match failure {
        Some(cause) => Err(EngineError::Aborted {
            cause: Box::new(cause),
            partial: Box::new(out),
        }),
        None => Ok(out),
    }
}
