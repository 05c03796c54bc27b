#![allow(dead_code)]

pub mod equivalence;
pub mod golden;
pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricomm::{AttributedGraph, CommunityCollection, FeatureKind, NodeId};

/// Random attributed graph: `n` nodes, G(n, p) edges, random features.
pub fn random_graph(seed: u64, n: usize, edge_p: f64, kind: FeatureKind, dim: usize) -> AttributedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as NodeId {
        for b in a + 1..n as NodeId {
            if rng.gen_bool(edge_p) {
                edges.push((a, b));
            }
        }
    }
    let g = AttributedGraph::from_edges(n, edges);
    match kind {
        FeatureKind::None => g,
        FeatureKind::Binary => {
            let values = (0..n * dim)
                .map(|_| if rng.gen_bool(0.4) { 1.0 } else { 0.0 })
                .collect();
            g.with_features(kind, dim, values).unwrap()
        }
        FeatureKind::Continuous => {
            let values = (0..n * dim)
                .map(|_| {
                    if rng.gen_bool(0.15) {
                        0.0
                    } else {
                        // Coarse grid so argmax ties actually occur.
                        (rng.gen_range(0..6) as f64) / 5.0
                    }
                })
                .collect();
            g.with_features(kind, dim, values).unwrap()
        }
    }
}

/// Random cover of `0..n`: every node in one base community, some nodes in a
/// second one when `overlap` is set.
pub fn random_cover(seed: u64, n: usize, k: usize, overlap: bool) -> CommunityCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut comms: Vec<Vec<NodeId>> = vec![Vec::new(); k];
    for v in 0..n as NodeId {
        comms[rng.gen_range(0..k)].push(v);
        if overlap && rng.gen_bool(0.3) {
            comms[rng.gen_range(0..k)].push(v);
        }
    }
    comms.retain(|c| !c.is_empty());
    CommunityCollection::new(comms).unwrap()
}

/// Random subset of `0..n` (possibly empty).
pub fn random_subset(seed: u64, n: usize, p: f64) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);
    (0..n as NodeId).filter(|_| rng.gen_bool(p)).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= tol * scale
}

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3, with one
/// binary feature per triangle.
pub fn bridged_triangles() -> AttributedGraph {
    AttributedGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
        .with_features(
            FeatureKind::Binary,
            2,
            vec![1., 0., 1., 0., 1., 0., 0., 1., 0., 1., 0., 1.],
        )
        .unwrap()
}
