use proptest::prelude::*;
use scd_core::io::{generate, parse_edge_list, write_edge_list, DecompositionJson, GraphModel};
use scd_core::verification::verify_decomposition;
use scd_core::{decompose, EngineConfig, MultiGraph};

fn decompose_and_verify(g: &MultiGraph, c: u32, seed: u64) -> scd_core::CycleDecomposition {
    let cfg = EngineConfig::new(c, seed);
    let d = decompose(g, &cfg).expect("decompose");
    let n = g.vertex_count();
    verify_decomposition(g, &d, 20 * n, n.max(1)).expect("valid decomposition");
    d
}

#[test]
fn every_model_decomposes() {
    for model in ["gnm", "d_regular", "parallel_gadgets", "torus"] {
        let g = generate(&GraphModel::from_name(model, 256, 30).unwrap(), 7).unwrap();
        for c in 1..=3 {
            let d = decompose_and_verify(&g, c, 7);
            assert_eq!(d.source_m, g.edge_count());
        }
    }
}

#[test]
fn loops_and_parallel_edges() {
    // A loop is a cycle of length one, a parallel pair a cycle of length two.
    let g = MultiGraph::from_edges(3, &[(0, 0), (1, 2), (1, 2), (0, 1)]).unwrap();
    let d = decompose_and_verify(&g, 1, 0);
    let covered: usize = d.cycles.iter().map(|c| c.len()).sum();
    assert_eq!(covered + d.leftover.len(), 4);
}

#[test]
fn same_seed_same_output() {
    let g = generate(&GraphModel::Gnm { n: 512, m: 512 * 30 }, 3).unwrap();
    let cfg = EngineConfig::new(2, 11);
    let a = DecompositionJson::new(&decompose(&g, &cfg).unwrap(), &cfg, 0).canonical_string();
    let b = DecompositionJson::new(&decompose(&g, &cfg).unwrap(), &cfg, 0).canonical_string();
    assert_eq!(a, b);
}

#[test]
fn json_round_trip_still_verifies() {
    let g = generate(&GraphModel::from_name("d_regular", 128, 20).unwrap(), 5).unwrap();
    let cfg = EngineConfig::new(1, 5);
    let d = decompose(&g, &cfg).unwrap();
    let json = serde_json::to_string(&DecompositionJson::new(&d, &cfg, 12)).unwrap();
    let back: DecompositionJson = serde_json::from_str(&json).unwrap();
    verify_decomposition(&g, &back.to_decomposition(), 20 * 128, 128).unwrap();
}

#[test]
fn edge_list_round_trip() {
    let g = generate(&GraphModel::from_name("parallel_gadgets", 64, 10).unwrap(), 1).unwrap();
    let text = write_edge_list(&g);
    let h = parse_edge_list(text.as_bytes()).unwrap();
    assert_eq!(write_edge_list(&h), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arbitrary_multigraphs(n in 1usize..24, raw in prop::collection::vec((0usize..24, 0usize..24), 0..120), seed in any::<u64>()) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let g = MultiGraph::from_edges(n, &edges).unwrap();
        decompose_and_verify(&g, 1 + (seed % 3) as u32, seed);
    }
}
