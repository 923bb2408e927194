//! Low-diameter decomposition by exponentially shifted clustering.
//!
//! Every vertex `v` draws a shift `δ_v ~ Exp(β)` (truncated at
//! `(2/β)·ln(n+1)`) and starts growing a ball at time `cap − δ_v`. Each
//! vertex joins the first ball to reach it; ties go to the smaller center.
//! The cut set is every edge joining two different clusters. Keys are kept
//! in 32.32 fixed point so the race is exact and reproducible per seed.
//!
//! An attempt is accepted only when `|R| ≤ β·m` and every cluster's strong
//! diameter is within `ceil((C/β)·ln(n+1))`; otherwise shifts are resampled.


use rand::RngCore;
use thiserror::Error;

use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::ratio::Ratio;
use crate::verification::measure_diameter;

const FIXED_ONE: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LddParams {
    pub beta: Ratio,
    /// `C` in the diameter cap `ceil((C/β)·ln(n+1))`.
    pub diam_constant: f64,
    pub max_retries: u32,
}

impl Default for LddParams {
    fn default() -> Self {
        LddParams {
            beta: Ratio::new(1, 12),
            diam_constant: 4.0,
            max_retries: 20,
        }
    }
}

impl LddParams {
    pub fn with_beta(beta: Ratio) -> Self {
        LddParams {
            beta,
            ..Self::default()
        }
    }

    /// Strong-diameter cap for a graph with `n` vertices.
    pub fn diameter_cap(&self, n: usize) -> u64 {
        (self.diam_constant / self.beta.to_f64() * ((n + 1) as f64).ln()).ceil() as u64
    }

    /// Truncation point for the exponential shifts.
    pub fn shift_cap(&self, n: usize) -> f64 {
        2.0 / self.beta.to_f64() * ((n + 1) as f64).ln()
    }
}

#[derive(Clone, Debug)]
pub struct LddResult {
    /// Inter-cluster edges `R`, in increasing id order.
    pub removed: Vec<EdgeId>,
    /// Clusters in order of their smallest vertex; each list is sorted.
    pub clusters: Vec<Vec<VertexId>>,
    /// Cluster index of every vertex slot (`None` for inactive slots).
    pub cluster_of: Vec<Option<u32>>,
    /// Upper bound on the strong diameter of every cluster: twice the
    /// deepest shortest-path tree inside a cluster, or the exact value
    /// when that bound exceeded the cap.
    pub max_diameter: u64,
    pub diameter_cap: u64,
    /// Attempts made, including the accepted one.
    pub attempts: u32,
    /// Shifts clipped at the truncation point, summed over attempts.
    pub truncations: u64,
}

impl LddResult {
    /// Resampling rounds beyond the first attempt.
    pub fn retries(&self) -> u32 {
        self.attempts.saturating_sub(1)
    }
}

#[derive(Debug, Clone, Error)]
pub enum LddError {
    #[error("low-diameter decomposition needs a nonempty graph")]
    EmptyGraph,
    #[error("beta must lie in (0, 1], got {0}")]
    InvalidBeta(Ratio),
    #[error("no acceptable decomposition after {attempts} attempts (best cut {best_cut} edges)")]
    RetriesExhausted {
        attempts: u32,
        best_cut: usize,
        best: Box<LddResult>,
    },
}

/// Draws `Exp(rate)` by inverse CDF on a 53-bit uniform in `[0, 1)`.
fn sample_exponential(rng: &mut impl RngCore, rate: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    -(1.0 - u).ln() / rate
}

struct Attempt {
    cluster_of: Vec<Option<u32>>,
    clusters: Vec<Vec<VertexId>>,
    removed: Vec<EdgeId>,
    max_radius: u64,
    truncations: u64,
}

fn run_attempt(g: &MultiGraph, params: &LddParams, rng: &mut impl RngCore) -> Attempt {
    let n = g.vertex_count();
    let cap = params.shift_cap(n);
    let rate = params.beta.to_f64();
    let slots = g.vertex_slots();

    let mut start = vec![0u64; slots];
    let mut truncations = 0;
    for v in g.vertices() {
        let mut shift = sample_exponential(rng, rate);
        if shift > cap {
            shift = cap;
            truncations += 1;
        }
        start[v.index()] = ((cap - shift) * FIXED_ONE as f64).round() as u64;
    }

    // Race of all centers with unit edge lengths, processed in (key, center)
    // order. Every relaxation adds exactly one to a popped key, so relaxed
    // entries are produced in sorted order: merging them, as a FIFO, with
    // the sorted start entries replaces a priority queue. A vertex is queued
    // again only when its tentative (key, center) strictly improves.
    let mut best: Vec<(u64, u32)> = vec![(u64::MAX, u32::MAX); slots];
    let mut starts: Vec<(u64, u32)> = g.vertices().map(|v| (start[v.index()], v.0)).collect();
    starts.sort_unstable();
    for &(key, v) in &starts {
        best[v as usize] = (key, v);
    }
    // (key, center, vertex, hops)
    let mut relaxed: Vec<(u64, u32, u32, u32)> = Vec::new();
    let (mut si, mut ri) = (0, 0);
    let mut center = vec![u32::MAX; slots];
    let mut max_radius = 0u64;
    loop {
        let from_start = match (starts.get(si), relaxed.get(ri)) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(&(k, c)), Some(&(rk, rc, _, _))) => (k, c) <= (rk, rc),
        };
        let (key, c, x, hops) = if from_start {
            let (k, v) = starts[si];
            si += 1;
            (k, v, v, 0)
        } else {
            ri += 1;
            relaxed[ri - 1]
        };
        if center[x as usize] != u32::MAX || best[x as usize] != (key, c) {
            continue;
        }
        center[x as usize] = c;
        max_radius = max_radius.max(hops as u64);
        let xv = VertexId(x);
        let next = key + FIXED_ONE;
        for &y in g.neighbors(xv) {
            let y = y.index();
            if center[y] == u32::MAX && (next, c) < best[y] {
                best[y] = (next, c);
                relaxed.push((next, c, y as u32, hops + 1));
            }
        }
    }

    let mut index_of_center = vec![u32::MAX; slots];
    let mut cluster_of = vec![None; slots];
    let mut clusters: Vec<Vec<VertexId>> = Vec::new();
    for v in g.vertices() {
        let c = center[v.index()] as usize;
        if index_of_center[c] == u32::MAX {
            index_of_center[c] = clusters.len() as u32;
            clusters.push(Vec::new());
        }
        let idx = index_of_center[c];
        cluster_of[v.index()] = Some(idx);
        clusters[idx as usize].push(v);
    }
    let removed = g
        .edges()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            cluster_of[u.index()] != cluster_of[v.index()]
        })
        .collect();
    Attempt {
        cluster_of,
        clusters,
        removed,
        max_radius,
        truncations,
    }
}

/// Removes at most `β·m` edges so every remaining component has strong
/// diameter at most `ceil((C/β)·ln(n+1))`.
///
/// The returned clusters are exactly the connected components of `g ∖ R`.
pub fn low_diam_decomp(
    g: &MultiGraph,
    params: &LddParams,
    rng: &mut impl RngCore,
) -> Result<LddResult, LddError> {
    if g.vertex_count() == 0 {
        return Err(LddError::EmptyGraph);
    }
    let beta = params.beta;
    if beta.num() == 0 || beta.num() > beta.den() {
        return Err(LddError::InvalidBeta(beta));
    }
    let n = g.vertex_count();
    let m = g.edge_count() as u128;
    let diameter_cap = params.diameter_cap(n);
    let attempts_allowed = params.max_retries.max(1);

    let mut best: Option<LddResult> = None;
    let mut truncations = 0;
    for attempt in 1..=attempts_allowed {
        let a = run_attempt(g, params, rng);
        truncations += a.truncations;
        let mut max_diameter = 2 * a.max_radius;
        if max_diameter > diameter_cap {
            // The radius bound is loose; measure the offending clusters.
            max_diameter = 0;
            for cluster in &a.clusters {
                let d = measure_diameter(g, cluster).expect("clusters are connected") as u64;
                max_diameter = max_diameter.max(d);
            }
        }
        let cut_ok = beta.den() as u128 * a.removed.len() as u128 <= beta.num() as u128 * m;
        let result = LddResult {
            removed: a.removed,
            clusters: a.clusters,
            cluster_of: a.cluster_of,
            max_diameter,
            diameter_cap,
            attempts: attempt,
            truncations,
        };
        if cut_ok && max_diameter <= diameter_cap {
            return Ok(result);
        }
        if best.as_ref().is_none_or(|b| result.removed.len() < b.removed.len()) {
            best = Some(result);
        }
    }
    let mut best = best.expect("at least one attempt");
    best.truncations = truncations;
    Err(LddError::RetriesExhausted {
        attempts: attempts_allowed,
        best_cut: best.removed.len(),
        best: Box::new(best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::measure_diameter;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_partition(g: &MultiGraph, r: &LddResult) {
        let total: usize = r.clusters.iter().map(Vec::len).sum();
        assert_eq!(total, g.vertex_count());
        let mut removed = vec![false; g.edge_slots()];
        for &e in &r.removed {
            removed[e.index()] = true;
        }
        for e in g.edges() {
            let (u, v) = g.endpoints(e);
            let same = r.cluster_of[u.index()] == r.cluster_of[v.index()];
            assert_eq!(same, !removed[e.index()]);
        }
    }

    #[test]
    fn triangle_with_beta_one() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = low_diam_decomp(&g, &LddParams::with_beta(Ratio::new(1, 1)), &mut rng).unwrap();
        check_partition(&g, &r);
        for c in &r.clusters {
            assert!(measure_diameter(&g, c).unwrap() as u64 <= r.diameter_cap);
        }
    }

    #[test]
    fn star_cap_is_generous() {
        let edges: Vec<_> = (1..100).map(|i| (0, i)).collect();
        let g = MultiGraph::from_edges(100, &edges).unwrap();
        let params = LddParams::default();
        assert_eq!(params.diameter_cap(100), (48.0 * 101f64.ln()).ceil() as u64);
        assert!(2 <= params.diameter_cap(100));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = low_diam_decomp(&g, &params, &mut rng).unwrap();
        check_partition(&g, &r);
        assert!(r.removed.len() <= 99 / 12);
    }

    #[test]
    fn long_path() {
        let edges: Vec<_> = (0..999).map(|i| (i, i + 1)).collect();
        let g = MultiGraph::from_edges(1000, &edges).unwrap();
        let params = LddParams::default();
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = low_diam_decomp(&g, &params, &mut rng).unwrap();
            check_partition(&g, &r);
            assert!(r.removed.len() <= 83);
            for c in &r.clusters {
                let d = measure_diameter(&g, c).unwrap() as u64;
                assert!(d <= r.max_diameter && d <= r.diameter_cap);
            }
        }
    }

    #[test]
    fn same_seed_same_clusters() {
        let edges: Vec<_> = (0..300).map(|i| (i % 50, (i * 7 + 3) % 50)).collect();
        let g = MultiGraph::from_edges(50, &edges).unwrap();
        let run = |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            low_diam_decomp(&g, &LddParams::default(), &mut rng).unwrap().cluster_of
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn rejects_empty_graph_and_bad_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            low_diam_decomp(&MultiGraph::new(0), &LddParams::default(), &mut rng),
            Err(LddError::EmptyGraph)
        ));
        let g = MultiGraph::new(2);
        assert!(matches!(
            low_diam_decomp(&g, &LddParams::with_beta(Ratio::new(3, 2)), &mut rng),
            Err(LddError::InvalidBeta(_))
        ));
    }

    #[test]
    fn exhausted_retries_report_best_attempt() {
        // A tiny beta forces |R| = 0, which a long path cannot satisfy
        // unless one cluster swallows everything.
        let edges: Vec<_> = (0..199).map(|i| (i, i + 1)).collect();
        let g = MultiGraph::from_edges(200, &edges).unwrap();
        let params = LddParams {
            beta: Ratio::new(1, 1_000_000),
            diam_constant: 0.000_001,
            max_retries: 3,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        match low_diam_decomp(&g, &params, &mut rng) {
            Err(LddError::RetriesExhausted { attempts, best, .. }) => {
                assert_eq!(attempts, 3);
                check_partition(&g, &best);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
