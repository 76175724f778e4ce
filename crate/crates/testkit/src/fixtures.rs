use std::path::PathBuf;

use commenhance::graph::{Graph, Partition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::Dense;

pub fn datasets_dir() -> PathBuf {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../datasets");
    path.canonicalize().unwrap_or(path)
}

pub fn dense(graph: &Graph) -> Dense {
    let edges: Vec<(usize, usize)> = graph.edges().map(|e| (e.u(), e.v())).collect();
    Dense::new(graph.node_count(), &edges)
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied())
}

/// G(n, p) with `n` drawn from `min_n..=max_n`.
pub fn random_graph(rng: &mut impl Rng, min_n: usize, max_n: usize, p: f64) -> Graph {
    let n = rng.gen_range(min_n..=max_n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    graph(n, &edges)
}

pub fn random_partition(rng: &mut impl Rng, n: usize, max_k: usize) -> Partition {
    let k = rng.gen_range(1..=max_k.max(1));
    Partition::from_labels((0..n).map(|_| rng.gen_range(0..k)))
}

/// Two hubs A (0) and B (1), not adjacent, sharing four neighbours 2..=5 in
/// their own community. A also touches 6..=9 in a second community; B
/// touches 10, 11 in the second and 12, 13 in a third.
pub fn two_hubs() -> (Graph, Partition) {
    let mut edges = Vec::new();
    for p in 2..=5 {
        edges.push((0, p));
        edges.push((1, p));
    }
    for q in 6..=9 {
        edges.push((0, q));
    }
    for r in 10..=13 {
        edges.push((1, r));
    }
    let labels = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2];
    (graph(14, &edges), Partition::from_labels(labels))
}

pub fn clique_edges(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in nodes.clone() {
        for j in i + 1..nodes.end {
            edges.push((i, j));
        }
    }
    edges
}

/// Two 5-cliques {0..5} and {5..10} joined by the edge (4, 5).
pub fn two_cliques() -> (Graph, Partition) {
    let mut edges = clique_edges(0..5);
    edges.extend(clique_edges(5..10));
    edges.push((4, 5));
    let truth = Partition::from_labels((0..10).map(|i| i / 5));
    (graph(10, &edges), truth)
}

/// [`two_cliques`] with `removed` intra-clique edges deleted at random.
pub fn damaged_cliques(seed: u64, removed: usize) -> (Graph, Partition, Vec<(usize, usize)>) {
    let mut intra = clique_edges(0..5);
    intra.extend(clique_edges(5..10));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    intra.shuffle(&mut rng);
    let dropped: Vec<(usize, usize)> = intra.drain(..removed).collect();
    intra.push((4, 5));
    let truth = Partition::from_labels((0..10).map(|i| i / 5));
    (graph(10, &intra), truth, dropped)
}

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge (2, 3).
pub fn bridged_triangles() -> Graph {
    graph(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
}
