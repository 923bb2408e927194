//! Edge-list files, random graph generators, the decomposition JSON schema
//! and the benchmark runner.
//!
//! Edge-list format:
//!
//! ```text
//! # comment
//! p scd <n> <m>
//! <u> <v>        (m lines, 0-indexed; "u u" is a loop)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{decompose, mix64, CycleDecomposition, EngineConfig, EngineError, LevelStats};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::primitives::Cycle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Reads an edge list; edge ids follow line order.
pub fn parse_edge_list(bytes: &[u8]) -> Result<MultiGraph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        parse_err(line, "input is not valid UTF-8")
    })?;
    let mut graph: Option<(MultiGraph, usize)> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match &mut graph {
            None => {
                let [p, tag, n, m] = fields[..] else {
                    return Err(parse_err(line, "expected header \"p scd <n> <m>\""));
                };
                if p != "p" || tag != "scd" {
                    return Err(parse_err(line, "expected header \"p scd <n> <m>\""));
                }
                let n: usize = n.parse().map_err(|_| parse_err(line, format!("bad vertex count {n:?}")))?;
                let m: usize = m.parse().map_err(|_| parse_err(line, format!("bad edge count {m:?}")))?;
                if n > u32::MAX as usize || m > u32::MAX as usize {
                    return Err(parse_err(line, "graph too large"));
                }
                graph = Some((MultiGraph::with_capacity(n, m), m));
            }
            Some((g, m)) => {
                let [u, v] = fields[..] else {
                    return Err(parse_err(line, "expected \"<u> <v>\""));
                };
                if g.edge_count() == *m {
                    return Err(parse_err(line, format!("more than {m} edge lines")));
                }
                let n = g.vertex_slots();
                let endpoint = |s: &str| -> Result<VertexId, ParseError> {
                    let x: usize = s.parse().map_err(|_| parse_err(line, format!("bad endpoint {s:?}")))?;
                    if x >= n {
                        return Err(parse_err(line, format!("endpoint {x} out of range for n = {n}")));
                    }
                    Ok(VertexId::from(x))
                };
                let (u, v) = (endpoint(u)?, endpoint(v)?);
                g.add_edge(u, v);
            }
        }
    }
    let Some((g, m)) = graph else {
        return Err(parse_err(last_line + 1, "missing header"));
    };
    if g.edge_count() != m {
        return Err(parse_err(
            last_line + 1,
            format!("header declares {m} edges, found {}", g.edge_count()),
        ));
    }
    Ok(g)
}

/// Writes the active edges in id order. Ids survive a round trip when `g`
/// has no deleted edges.
pub fn write_edge_list(g: &MultiGraph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.edge_count());
    out.push_str(&format!("p scd {} {}\n", g.vertex_slots(), g.edge_count()));
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        out.push_str(&format!("{} {}\n", u.0, v.0));
    }
    out
}

/// Random graph families used for testing and benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GraphModel {
    /// `m` independent uniform endpoint pairs; loops and repeats allowed.
    Gnm { n: usize, m: usize },
    /// Configuration model: `d` stubs per vertex, uniformly paired.
    DRegular { n: usize, d: usize },
    /// `√n × √n` grid with wraparound.
    Torus { n: usize },
    /// A random perfect matching with every pair joined by `d` parallel edges.
    ParallelGadgets { n: usize, d: usize },
}

pub const MODEL_NAMES: [&str; 4] = ["gnm", "d_regular", "torus", "parallel_gadgets"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown model {0:?} (expected one of gnm, d_regular, torus, parallel_gadgets)")]
    UnknownModel(String),
    #[error("{0}")]
    InvalidParams(String),
}

impl GraphModel {
    /// Model `name` on `n` vertices with about `ratio · n` edges. The torus
    /// ignores `ratio` (it always has `2n` edges).
    pub fn from_name(name: &str, n: usize, ratio: usize) -> Result<Self, GenError> {
        Ok(match name {
            "gnm" => GraphModel::Gnm { n, m: ratio * n },
            "d_regular" => GraphModel::DRegular { n, d: 2 * ratio },
            "torus" => GraphModel::Torus { n },
            "parallel_gadgets" => GraphModel::ParallelGadgets { n, d: 2 * ratio },
            other => return Err(GenError::UnknownModel(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphModel::Gnm { .. } => "gnm",
            GraphModel::DRegular { .. } => "d_regular",
            GraphModel::Torus { .. } => "torus",
            GraphModel::ParallelGadgets { .. } => "parallel_gadgets",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            GraphModel::Gnm { n, .. }
            | GraphModel::DRegular { n, .. }
            | GraphModel::Torus { n }
            | GraphModel::ParallelGadgets { n, .. } => n,
        }
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphModel::Gnm { n, m } => write!(f, "gnm(n={n}, m={m})"),
            GraphModel::DRegular { n, d } => write!(f, "d_regular(n={n}, d={d})"),
            GraphModel::Torus { n } => write!(f, "torus(n={n})"),
            GraphModel::ParallelGadgets { n, d } => write!(f, "parallel_gadgets(n={n}, d={d})"),
        }
    }
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParams(msg.into())
}

/// Builds a graph of the given model; the same seed gives the same graph.
pub fn generate(model: &GraphModel, seed: u64) -> Result<MultiGraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = match *model {
        GraphModel::Gnm { n, m } => {
            if n == 0 && m > 0 {
                return Err(invalid("gnm needs n >= 1 when m > 0"));
            }
            (0..m).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
        }
        GraphModel::DRegular { n, d } => {
            if (n * d) % 2 == 1 {
                return Err(invalid(format!("d_regular needs n·d even (n = {n}, d = {d})")));
            }
            let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
            stubs.shuffle(&mut rng);
            stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect()
        }
        GraphModel::Torus { n } => {
            let side = (n as f64).sqrt().round() as usize;
            if side == 0 || side * side != n {
                return Err(invalid(format!("torus needs a positive square n, got {n}")));
            }
            let at = |r: usize, c: usize| (r % side) * side + (c % side);
            let mut edges = Vec::with_capacity(2 * n);
            for r in 0..side {
                for c in 0..side {
                    edges.push((at(r, c), at(r, c + 1)));
                    edges.push((at(r, c), at(r + 1, c)));
                }
            }
            edges
        }
        GraphModel::ParallelGadgets { n, d } => {
            if n % 2 == 1 {
                return Err(invalid(format!("parallel_gadgets needs even n, got {n}")));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            order
                .chunks_exact(2)
                .flat_map(|p| std::iter::repeat_n((p[0], p[1]), d))
                .collect()
        }
    };
    MultiGraph::from_edges(model.n(), &edges).map_err(|e| invalid(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub k_hat_observed: usize,
    pub max_cycle_length: usize,
    pub length_histogram: BTreeMap<usize, usize>,
    pub levels: Vec<LevelStats>,
    pub wall_ms: u64,
}

/// On-disk form of a decomposition. Edge ids are authoritative; the vertex
/// sequences are for reading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub n: usize,
    pub m: usize,
    pub c: u32,
    pub seed: u64,
    pub cycles: Vec<Vec<u32>>,
    pub cycle_vertices: Vec<Vec<u32>>,
    pub leftover: Vec<u32>,
    pub stats: DecompositionStats,
}

impl DecompositionJson {
    pub fn new(d: &CycleDecomposition, cfg: &EngineConfig, wall_ms: u64) -> Self {
        let mut histogram = BTreeMap::new();
        for c in &d.cycles {
            *histogram.entry(c.len()).or_insert(0) += 1;
        }
        DecompositionJson {
            n: d.source_n,
            m: d.source_m,
            c: cfg.c,
            seed: cfg.seed,
            cycles: d.cycles.iter().map(|c| c.edges.iter().map(|e| e.0).collect()).collect(),
            cycle_vertices: d
                .cycles
                .iter()
                .map(|c| c.vertices.iter().map(|v| v.0).collect())
                .collect(),
            leftover: d.leftover.iter().map(|e| e.0).collect(),
            stats: DecompositionStats {
                k_hat_observed: d.leftover.len(),
                max_cycle_length: d.max_cycle_length(),
                length_histogram: histogram,
                levels: d.levels.clone(),
                wall_ms,
            },
        }
    }

    /// Back to the in-memory form. Cycles missing a vertex list get an empty
    /// one, which verification reports as malformed.
    pub fn to_decomposition(&self) -> CycleDecomposition {
        let cycles = self
            .cycles
            .iter()
            .enumerate()
            .map(|(i, edges)| Cycle {
                vertices: self
                    .cycle_vertices
                    .get(i)
                    .map(|vs| vs.iter().map(|&v| VertexId(v)).collect())
                    .unwrap_or_default(),
                edges: edges.iter().map(|&e| EdgeId(e)).collect(),
            })
            .collect();
        CycleDecomposition {
            cycles,
            leftover: self.leftover.iter().map(|&e| EdgeId(e)).collect(),
            source_m: self.m,
            source_n: self.n,
            levels: self.stats.levels.clone(),
        }
    }

    /// Pretty JSON with `wall_ms` zeroed, for byte comparisons.
    pub fn canonical_string(&self) -> String {
        let mut copy = self.clone();
        copy.stats.wall_ms = 0;
        serde_json::to_string_pretty(&copy).expect("serializable")
    }
}

/// Decomposes `g`, timing the call. On an engine failure the partial
/// decomposition is still returned alongside the error.
pub fn run_decomposition(
    g: &MultiGraph,
    cfg: &EngineConfig,
) -> (DecompositionJson, Option<EngineError>) {
    let start = Instant::now();
    let (d, err) = match decompose(g, cfg) {
        Ok(d) => (d, None),
        Err(EngineError::Aborted { cause, partial }) => (*partial, Some(*cause)),
        Err(e) => {
            let d = CycleDecomposition {
                leftover: g.edges().collect(),
                source_m: g.edge_count(),
                source_n: g.vertex_count(),
                ..CycleDecomposition::default()
            };
            (d, Some(e))
        }
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    (DecompositionJson::new(&d, cfg, wall_ms), err)
}

/// One benchmark cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchCell {
    pub model: String,
    pub n: usize,
    pub c: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub c: u32,
    pub seed: u64,
    pub wall_ms: u64,
    pub k_hat_observed: usize,
    pub max_cycle_length: usize,
    pub rounds: u64,
    pub ldd_retries: u64,
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub models: Vec<String>,
    pub sizes: Vec<usize>,
    pub cs: Vec<u32>,
    pub seeds: u64,
    pub base_seed: u64,
    /// Edges per vertex for the generated graphs.
    pub edge_ratio: usize,
}

impl BenchPlan {
    /// Cells in model, size, c, seed order; cell `i` uses seed
    /// `mix64(base_seed, i)`.
    pub fn cells(&self) -> Vec<BenchCell> {
        let mut cells = Vec::new();
        for model in &self.models {
            for &n in &self.sizes {
                for &c in &self.cs {
                    for _ in 0..self.seeds {
                        let seed = mix64(self.base_seed, cells.len() as u64);
                        cells.push(BenchCell {
                            model: model.clone(),
                            n,
                            c,
                            seed,
                        });
                    }
                }
            }
        }
        cells
    }
}

/// Worker count: available parallelism, capped by `SCD_THREADS` when set.
pub fn bench_threads() -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("SCD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(cap) if cap >= 1 => avail.min(cap),
        _ => avail,
    }
}

/// Runs one cell: generate, decompose, summarize.
pub fn run_cell(cell: &BenchCell, edge_ratio: usize) -> Result<BenchRow, GenError> {
    let model = GraphModel::from_name(&cell.model, cell.n, edge_ratio)?;
    let g = generate(&model, cell.seed)?;
    let cfg = EngineConfig::new(cell.c, cell.seed);
    let (json, _) = run_decomposition(&g, &cfg);
    Ok(BenchRow {
        model: cell.model.clone(),
        n: g.vertex_count(),
        m: g.edge_count(),
        c: cell.c,
        seed: cell.seed,
        wall_ms: json.stats.wall_ms,
        k_hat_observed: json.stats.k_hat_observed,
        max_cycle_length: json.stats.max_cycle_length,
        rounds: json.stats.levels.iter().map(|l| l.rounds).sum(),
        ldd_retries: json.stats.levels.iter().map(|l| l.ldd_retries).sum(),
    })
}

/// Runs all cells on up to `threads` workers; rows come back in cell order.
pub fn run_bench(plan: &BenchPlan, threads: usize) -> Result<Vec<BenchRow>, GenError> {
    let cells = plan.cells();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut results: Vec<Option<Result<BenchRow, GenError>>> = vec![None; cells.len()];
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(cells.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let row = run_cell(cell, plan.edge_ratio);
                slots.lock().expect("worker panicked")[i] = Some(row);
            });
        }
    });
    results.into_iter().map(|r| r.expect("every cell ran")).collect()
}
