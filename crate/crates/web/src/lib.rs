//! Browser demo. Each operation returns a JSON string for the page script
//! to draw; the plain functions are usable natively, the `#[wasm_bindgen]`
//! wrappers turn errors into JS exceptions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scd_core::engine::{decompose, EngineConfig};
use scd_core::io::{generate, GraphModel};
use scd_core::ldd::{low_diam_decomp, LddParams};
use scd_core::multigraph::{bfs_spanning_tree, connected_components, VertexId};
use scd_core::primitives::{tree_split, LabeledTree};
use scd_core::ratio::Ratio;
use serde::Serialize;
use thiserror::Error;
use wasm_bindgen::prelude::*;

/// Largest vertex count the page is allowed to request.
pub const MAX_DEMO_N: usize = 4096;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("n must be between 1 and {MAX_DEMO_N}")]
    TooLarge,
    #[error("{0}")]
    Input(String),
}

fn input(e: impl ToString) -> DemoError {
    DemoError::Input(e.to_string())
}

fn check_n(n: usize) -> Result<(), DemoError> {
    if n == 0 || n > MAX_DEMO_N {
        return Err(DemoError::TooLarge);
    }
    Ok(())
}

#[derive(Serialize)]
pub struct CycleView {
    pub vertices: Vec<u32>,
    pub edges: Vec<u32>,
}

#[derive(Serialize)]
pub struct DecomposeView {
    pub n: usize,
    pub m: usize,
    /// Vertex positions in the unit square.
    pub positions: Vec<[f64; 2]>,
    pub edges: Vec<[u32; 2]>,
    pub cycles: Vec<CycleView>,
    pub leftover: usize,
    pub max_cycle_length: usize,
    /// `(length, count)` pairs in increasing length.
    pub histogram: Vec<[usize; 2]>,
    pub error: Option<String>,
}

fn circle(n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            [0.5 + 0.45 * a.cos(), 0.5 + 0.45 * a.sin()]
        })
        .collect()
}

fn grid(side: usize) -> Vec<[f64; 2]> {
    let step = 1.0 / side as f64;
    (0..side * side)
        .map(|i| [(i % side) as f64 * step + step / 2.0, (i / side) as f64 * step + step / 2.0])
        .collect()
}

/// Generates a graph of `model` with about `ratio · n` edges and decomposes
/// it. An engine failure still returns the partial result, with `error` set.
pub fn decompose_view(model: &str, n: usize, ratio: usize, c: u32, seed: u64) -> Result<DecomposeView, DemoError> {
    check_n(n)?;
    let g = generate(&GraphModel::from_name(model, n, ratio).map_err(input)?, seed).map_err(input)?;
    let cfg = EngineConfig::new(c, seed);
    cfg.validate().map_err(input)?;
    let (d, error) = match decompose(&g, &cfg) {
        Ok(d) => (d, None),
        Err(scd_core::EngineError::Aborted { cause, partial }) => (*partial, Some(cause.to_string())),
        Err(e) => return Err(input(e)),
    };
    let mut histogram: Vec<[usize; 2]> = Vec::new();
    let mut lengths: Vec<usize> = d.cycles.iter().map(|c| c.len()).collect();
    lengths.sort_unstable();
    for len in lengths {
        match histogram.last_mut() {
            Some(h) if h[0] == len => h[1] += 1,
            _ => histogram.push([len, 1]),
        }
    }
    let side = (n as f64).sqrt().round() as usize;
    Ok(DecomposeView {
        n,
        m: g.edge_count(),
        positions: if model == "torus" { grid(side) } else { circle(n) },
        edges: g.edges().map(|e| {
            let (u, v) = g.endpoints(e);
            [u.0, v.0]
        }).collect(),
        cycles: d
            .cycles
            .iter()
            .map(|c| CycleView {
                vertices: c.vertices.iter().map(|v| v.0).collect(),
                edges: c.edges.iter().map(|e| e.0).collect(),
            })
            .collect(),
        leftover: d.leftover.len(),
        max_cycle_length: d.max_cycle_length(),
        histogram,
        error,
    })
}

#[derive(Serialize)]
pub struct LddView {
    pub side: usize,
    pub cluster_of: Vec<u32>,
    pub clusters: usize,
    pub removed: usize,
    /// `⌊β·m⌋`, the most edges the cut may hold.
    pub cut_limit: u64,
    pub max_diameter: u64,
    pub diameter_cap: u64,
    pub attempts: u32,
}

/// Low-diameter decomposition of the `side × side` torus.
pub fn ldd_view(side: usize, beta_num: u64, beta_den: u64, seed: u64) -> Result<LddView, DemoError> {
    check_n(side.saturating_mul(side))?;
    if beta_den == 0 || beta_num == 0 || beta_num > beta_den {
        return Err(DemoError::Input("beta must lie in (0, 1]".into()));
    }
    let g = generate(&GraphModel::Torus { n: side * side }, seed).map_err(input)?;
    let beta = Ratio::new(beta_num, beta_den);
    let res = low_diam_decomp(&g, &LddParams::with_beta(beta), &mut ChaCha8Rng::seed_from_u64(seed)).map_err(input)?;
    Ok(LddView {
        side,
        cluster_of: res.cluster_of.iter().map(|c| c.unwrap_or(u32::MAX)).collect(),
        clusters: res.clusters.len(),
        removed: res.removed.len(),
        cut_limit: g.edge_count() as u64 * beta_num / beta_den,
        max_diameter: res.max_diameter,
        diameter_cap: res.diameter_cap,
        attempts: res.attempts,
    })
}

#[derive(Serialize)]
pub struct TreeSplitView {
    pub n: usize,
    pub positions: Vec<[f64; 2]>,
    pub tree_edges: Vec<[u32; 2]>,
    pub labels: Vec<u64>,
    pub part_of: Vec<u32>,
    pub part_sums: Vec<u64>,
    pub threshold: u64,
    /// `D·t + X`.
    pub window_max: u64,
}

/// Splits a BFS tree of a sparse random graph (the component of vertex 0)
/// with every vertex labeled by its graph degree.
pub fn tree_split_view(n: usize, threshold: u64, seed: u64) -> Result<TreeSplitView, DemoError> {
    check_n(n)?;
    let g = generate(&GraphModel::Gnm { n, m: 2 * n }, seed).map_err(input)?;
    let comp = connected_components(&g).into_iter().find(|c| c.contains(&VertexId(0))).expect("vertex 0");
    let tree = bfs_spanning_tree(&g, &comp, VertexId(0)).map_err(input)?;
    let lt = LabeledTree::new(tree, |v| g.degree(v) as u64);
    let parts = tree_split(&lt, threshold).map_err(input)?;

    // Layered layout: depth downwards, BFS order across.
    let order = lt.tree.vertices();
    let depth_max = lt.tree.max_depth().max(1) as f64;
    let mut per_depth = vec![0usize; lt.tree.max_depth() as usize + 1];
    for &v in order {
        per_depth[lt.tree.depth(v).unwrap() as usize] += 1;
    }
    let mut seen = vec![0usize; per_depth.len()];
    let mut positions = vec![[0.0, 0.0]; n];
    for &v in order {
        let d = lt.tree.depth(v).unwrap() as usize;
        seen[d] += 1;
        positions[v.index()] = [seen[d] as f64 / (per_depth[d] + 1) as f64, 0.05 + 0.9 * d as f64 / depth_max];
    }
    let mut part_of = vec![u32::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part_of[v.index()] = i as u32;
        }
    }
    Ok(TreeSplitView {
        n,
        positions,
        tree_edges: order
            .iter()
            .filter_map(|&v| lt.tree.parent(v).map(|(p, _)| [p.0, v.0]))
            .collect(),
        labels: (0..n).map(|i| lt.label(VertexId::from(i)).unwrap_or(0)).collect(),
        part_of,
        part_sums: parts.iter().map(|p| p.iter().filter_map(|&v| lt.label(v)).sum()).collect(),
        threshold,
        window_max: lt.window_max(threshold),
    })
}

fn to_js<T: Serialize>(r: Result<T, DemoError>) -> Result<String, JsError> {
    let view = r.map_err(|e| JsError::new(&e.to_string()))?;
    Ok(serde_json::to_string(&view).expect("serializable"))
}

#[wasm_bindgen]
pub fn decompose_demo(model: &str, n: usize, ratio: usize, c: u32, seed: u64) -> Result<String, JsError> {
    to_js(decompose_view(model, n, ratio, c, seed))
}

#[wasm_bindgen]
pub fn ldd_demo(side: usize, beta_num: u64, beta_den: u64, seed: u64) -> Result<String, JsError> {
    to_js(ldd_view(side, beta_num, beta_den, seed))
}

#[wasm_bindgen]
pub fn tree_split_demo(n: usize, threshold: u64, seed: u64) -> Result<String, JsError> {
    to_js(tree_split_view(n, threshold, seed))
}
