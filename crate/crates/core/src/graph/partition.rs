use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{Graph, NodeId};

/// Non-overlapping assignment of nodes to communities `0..K`.
///
/// Labels are always in canonical form: community ids are handed out in order
/// of first appearance when scanning nodes `0, 1, 2, ...`. Two partitions are
/// therefore equal exactly when they group the nodes the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct Partition {
    labels: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Relabels arbitrary per-node labels into canonical dense ids.
    pub fn from_labels<L, I>(labels: I) -> Self
    where
        L: Eq + Hash,
        I: IntoIterator<Item = L>,
    {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let labels: Vec<usize> = labels
            .into_iter()
            .map(|label| {
                let next = ids.len();
                *ids.entry(label).or_insert(next)
            })
            .collect();
        Self {
            community_count: ids.len(),
            labels,
        }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            community_count: n,
        }
    }

    /// All nodes in one community.
    pub fn uniform(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            community_count: usize::from(n > 0),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> usize {
        self.labels[node]
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Member count per community.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &label in &self.labels {
            sizes[label] += 1;
        }
        sizes
    }

    /// Node lists per community, ascending.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut groups = vec![Vec::new(); self.community_count];
        for (node, &label) in self.labels.iter().enumerate() {
            groups[label].push(node);
        }
        groups
    }
}

impl From<Vec<usize>> for Partition {
    fn from(labels: Vec<usize>) -> Self {
        Self::from_labels(labels)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(partition: Partition) -> Self {
        partition.labels
    }
}

/// Symmetric `K x K` edge counts between (and within) communities.
///
/// Diagonal entries count each intra-community edge once, so the upper
/// triangle including the diagonal sums to the edge count of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionMatrix {
    k: usize,
    counts: Vec<u64>,
}

impl ConnectionMatrix {
    pub fn community_count(&self) -> usize {
        self.k
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.k + b]
    }

    pub fn intra(&self, community: usize) -> u64 {
        self.get(community, community)
    }

    /// Sum of the upper triangle including the diagonal.
    pub fn total(&self) -> u64 {
        (0..self.k)
            .flat_map(|a| (a..self.k).map(move |b| (a, b)))
            .map(|(a, b)| self.get(a, b))
            .sum()
    }

    pub fn intra_total(&self) -> u64 {
        (0..self.k).map(|c| self.intra(c)).sum()
    }

    /// Row-major copy of the matrix.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.k.max(1)).map(<[u64]>::to_vec).collect()
    }
}

pub fn connection_matrix(graph: &Graph, partition: &Partition) -> ConnectionMatrix {
    let k = partition.community_count();
    let mut counts = vec![0u64; k * k];
    for edge in graph.edges() {
        let a = partition.label(edge.u());
        let b = partition.label(edge.v());
        counts[a * k + b] += 1;
        if a != b {
            counts[b * k + a] += 1;
        }
    }
    ConnectionMatrix { k, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_relabeling() {
        let p = Partition::from_labels(["b", "a", "b", "c"]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.community_count(), 3);
        assert_eq!(p, Partition::from_labels([7, 3, 7, 1]));
        assert_eq!(p.sizes(), vec![2, 1, 1]);
    }

    #[test]
    fn triangle_single_community() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let cm = connection_matrix(&g, &Partition::uniform(3));
        assert_eq!(cm.to_rows(), vec![vec![3]]);
    }

    #[test]
    fn four_cycle_two_halves() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let cm = connection_matrix(&g, &Partition::from_labels([0, 0, 1, 1]));
        assert_eq!(cm.to_rows(), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(cm.total(), 4);
    }

    #[test]
    fn converts_to_and_from_label_list() {
        let p = Partition::from_labels([4, 4, 9]);
        let labels: Vec<usize> = p.clone().into();
        assert_eq!(labels, vec![0, 0, 1]);
        assert_eq!(Partition::from(labels), p);
    }
}
