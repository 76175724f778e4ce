use serde::{Deserialize, Serialize};

use super::{connection_matrix, Graph, Partition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralStats {
    pub nodes: usize,
    pub edges: usize,
    pub transitivity: f64,
    /// Present only when a partition was supplied.
    pub communities: Option<usize>,
    pub intra_fraction: Option<f64>,
}

/// Number of triangles, each counted once.
pub fn triangle_count(graph: &Graph) -> u64 {
    graph
        .edges()
        .map(|e| graph.common_neighbors(e.u(), e.v()).filter(|&w| w > e.v()).count() as u64)
        .sum()
}

/// Global clustering coefficient: 3 x triangles / connected triples.
/// Zero for graphs without any connected triple.
pub fn transitivity(graph: &Graph) -> f64 {
    let triples: u64 = (0..graph.node_count())
        .map(|x| {
            let d = graph.degree(x) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return 0.0;
    }
    3.0 * triangle_count(graph) as f64 / triples as f64
}

pub fn structural_stats(graph: &Graph, partition: Option<&Partition>) -> StructuralStats {
    let (communities, intra_fraction) = match partition {
        Some(p) => {
            let cm = connection_matrix(graph, p);
            let intra = if graph.edge_count() == 0 {
                0.0
            } else {
                cm.intra_total() as f64 / graph.edge_count() as f64
            };
            (Some(p.community_count()), Some(intra))
        }
        None => (None, None),
    };
    StructuralStats {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        transitivity: transitivity(graph),
        communities,
        intra_fraction,
    }
}
