use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DetectorConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Partition};

/// Asynchronous label propagation.
///
/// Every node starts in its own community. Each sweep visits the nodes in a
/// freshly shuffled order and sets each node's label to the most frequent
/// label among its neighbors; ties are broken uniformly at random among the
/// tied labels. The node's own label only counts if a neighbor carries it.
/// Stops after a sweep without changes or after `max_sweeps` sweeps.
pub fn lpa(graph: &Graph, config: &DetectorConfig) -> Result<Partition> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    config.validate()?;
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<NodeId> = (0..n).collect();
    // Dense counters indexed by label; `touched` lists the labels seen at the current node.
    let mut counts = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();

    for _ in 0..config.max_sweeps {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &node in &order {
            if graph.degree(node) == 0 {
                continue;
            }
            touched.clear();
            for &nbr in graph.neighbors(node) {
                let label = labels[nbr];
                if counts[label] == 0 {
                    touched.push(label);
                }
                counts[label] += 1;
            }
            let best = touched.iter().map(|&l| counts[l]).max().unwrap_or(0);
            tied.clear();
            tied.extend(touched.iter().copied().filter(|&l| counts[l] == best));
            for &label in &touched {
                counts[label] = 0;
            }
            tied.sort_unstable();
            let chosen = if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.gen_range(0..tied.len())]
            };
            if chosen != labels[node] {
                labels[node] = chosen;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Partition::from_labels(labels))
}
