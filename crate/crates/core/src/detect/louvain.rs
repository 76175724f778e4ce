use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DetectorConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

const MIN_GAIN: f64 = 1e-12;

/// Weighted multigraph level of the Louvain hierarchy.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Weight of intra-node edges, each counted once.
    self_loops: Vec<f64>,
    /// Weighted degree, self-loops counted twice.
    strength: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &Graph) -> Self {
        let n = graph.node_count();
        Self {
            adjacency: (0..n)
                .map(|x| graph.neighbors(x).iter().map(|&y| (y, 1.0)).collect())
                .collect(),
            self_loops: vec![0.0; n],
            strength: (0..n).map(|x| graph.degree(x) as f64).collect(),
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Collapses each community into a single node. `community` must be dense.
    fn aggregate(&self, community: &[usize], k: usize) -> Self {
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
        let mut self_loops = vec![0.0; k];
        let mut strength = vec![0.0; k];
        for x in 0..self.len() {
            let cx = community[x];
            self_loops[cx] += self.self_loops[x];
            strength[cx] += self.strength[x];
            for &(y, w) in &self.adjacency[x] {
                let cy = community[y];
                if cx == cy {
                    // seen from both endpoints
                    self_loops[cx] += w / 2.0;
                } else {
                    *links[cx].entry(cy).or_insert(0.0) += w;
                }
            }
        }
        Self {
            adjacency: links.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
            strength,
        }
    }
}

/// One local-moving phase. Returns the dense community of every node, the
/// community count, and whether any node moved.
fn local_moves(level: &Level, two_m: f64, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, usize, bool) {
    let n = level.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total = level.strength.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link_weight = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut neighbors: Vec<usize> = Vec::new();
    let mut any_move = false;

    loop {
        let mut moved = false;
        for &x in &order {
            let home = community[x];
            let k = level.strength[x];
            neighbors.clear();
            for &(y, w) in &level.adjacency[x] {
                let c = community[y];
                if !seen[c] {
                    seen[c] = true;
                    neighbors.push(c);
                }
                link_weight[c] += w;
            }

            total[home] -= k;
            let gain = |c: usize| link_weight[c] - resolution * total[c] * k / two_m;
            let mut best = home;
            let mut best_gain = gain(home);
            for &c in &neighbors {
                let g = gain(c);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += k;
            community[x] = best;
            if best != home {
                moved = true;
            }

            for &c in &neighbors {
                link_weight[c] = 0.0;
                seen[c] = false;
            }
        }
        if !moved {
            break;
        }
        any_move = true;
    }

    let dense = Partition::from_labels(community);
    let k = dense.community_count();
    (dense.labels().to_vec(), k, any_move)
}

/// Two-phase Louvain modularity optimization (local moves, then
/// aggregation) repeated until a local-moving phase changes nothing.
pub fn louvain(graph: &Graph, config: &DetectorConfig) -> Result<Partition> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    config.validate()?;
    if graph.edge_count() == 0 {
        return Ok(Partition::singletons(graph.node_count()));
    }
    let two_m = 2.0 * graph.edge_count() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut membership: Vec<usize> = (0..graph.node_count()).collect();
    let mut level = Level::from_graph(graph);
    loop {
        let (community, k, moved) = local_moves(&level, two_m, config.resolution, &mut rng);
        if !moved {
            break;
        }
        for m in membership.iter_mut() {
            *m = community[*m];
        }
        level = level.aggregate(&community, k);
    }
    Ok(Partition::from_labels(membership))
}
