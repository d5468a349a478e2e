#![allow(dead_code)]

use branchtool::structure::scc_decompose;
use branchtool::{AdjacencyMatrix, MultiGraph};
use rand::rngs::StdRng;
use rand::Rng;

pub const CORPUS_SEED: u64 = 20_240_611;
pub const CORPUS_SIZE: usize = 200;

/// Random multigraph on `1..=max_n` nodes; each ordered pair (self-loops
/// included) carries an edge with probability `p`, of multiplicity
/// `1..=max_mult`.
pub fn random_graph(rng: &mut StdRng, max_n: usize, max_mult: u64, p: f64) -> MultiGraph {
    let n = rng.gen_range(1..=max_n);
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(p) {
                        rng.gen_range(1..=max_mult)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    MultiGraph::from_matrix(&rows).expect("square matrix")
}

/// The fixed property corpus: 200 graphs, n <= 6, multiplicities <= 2.
pub fn corpus() -> Vec<MultiGraph> {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| random_graph(&mut rng, 6, 2, 0.3)).collect()
}

/// Random strongly connected, non-trivial block of size `min_n..=max_n`.
pub fn random_irreducible(rng: &mut StdRng, min_n: usize, max_n: usize, max_mult: u64) -> AdjacencyMatrix {
    loop {
        let g = random_graph(rng, max_n, max_mult, 0.45);
        if g.node_count() < min_n {
            continue;
        }
        let scc = scc_decompose(&g);
        if scc.len() == 1 && !scc.is_trivial(&g, 0) {
            return g.adjacency_matrix();
        }
    }
}
