//! Undirected simple graphs over dense node ids, community partitions, and
//! the structural summaries the rest of the crate builds on.

mod io;
mod partition;
mod stats;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use io::{load_edge_list, load_labels, parse_edge_list, parse_labels, write_edge_list, EdgeListLoad};
pub use partition::{connection_matrix, ConnectionMatrix, Partition};
pub use stats::{structural_stats, transitivity, triangle_count, StructuralStats};

pub type NodeId = usize;

/// An undirected edge (or candidate edge) with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRecord {
    u: NodeId,
    v: NodeId,
}

impl EdgeRecord {
    /// Normalizes the endpoint order. Returns `None` for a self-loop.
    pub fn new(a: NodeId, b: NodeId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(Self { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(&self) -> NodeId {
        self.u
    }

    pub fn v(&self) -> NodeId {
        self.v
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

/// Undirected simple graph. Neighbor lists are kept sorted so that
/// membership tests and common-neighbor scans are merge based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    names: Option<Vec<String>>,
    name_index: HashMap<String, NodeId>,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn new(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
            names: None,
            name_index: HashMap::new(),
        }
    }

    /// Builds a graph from an edge iterator, dropping self-loops and repeats.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut graph = Self::new(n);
        for (a, b) in edges {
            graph.add_edge(a, b);
        }
        graph
    }

    /// Attaches original node labels. `names.len()` must equal the node count.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.node_count(), "one name per node");
        self.name_index = names.iter().enumerate().map(|(id, name)| (name.clone(), id)).collect();
        self.names = Some(names);
        self
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Sorted neighbor list of `node`.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        let (small, other) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.adjacency[small].binary_search(&other).is_ok()
    }

    /// Inserts the undirected edge `{a, b}`. Returns `false` (and leaves the
    /// graph untouched) for self-loops and edges that already exist.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return false;
        }
        let pos = match self.adjacency[a].binary_search(&b) {
            Ok(_) => return false,
            Err(pos) => pos,
        };
        self.adjacency[a].insert(pos, b);
        let pos = self.adjacency[b]
            .binary_search(&a)
            .expect_err("adjacency lists out of sync");
        self.adjacency[b].insert(pos, a);
        self.edge_count += 1;
        true
    }

    /// All edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRecord> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            let start = nbrs.partition_point(|&v| v <= u);
            nbrs[start..].iter().map(move |&v| EdgeRecord { u, v })
        })
    }

    /// Common neighbors of `a` and `b` in ascending order.
    pub fn common_neighbors(&self, a: NodeId, b: NodeId) -> CommonNeighbors<'_> {
        CommonNeighbors {
            left: &self.adjacency[a],
            right: &self.adjacency[b],
        }
    }

    /// Original label of `node`, or its numeric id when the graph has none.
    pub fn node_name(&self, node: NodeId) -> String {
        match &self.names {
            Some(names) => names[node].clone(),
            None => node.to_string(),
        }
    }

    pub fn node_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Looks a node up by its original label (or numeric id for unnamed graphs).
    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        match &self.names {
            Some(_) => self.name_index.get(name).copied(),
            None => name.parse().ok().filter(|&id| id < self.node_count()),
        }
    }
}

/// Sorted-merge iterator over two neighbor lists.
#[derive(Debug, Clone)]
pub struct CommonNeighbors<'a> {
    left: &'a [NodeId],
    right: &'a [NodeId],
}

impl Iterator for CommonNeighbors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        while let (Some(&l), Some(&r)) = (self.left.first(), self.right.first()) {
            match l.cmp(&r) {
                std::cmp::Ordering::Less => self.left = &self.left[1..],
                std::cmp::Ordering::Greater => self.right = &self.right[1..],
                std::cmp::Ordering::Equal => {
                    self.left = &self.left[1..];
                    self.right = &self.right[1..];
                    return Some(l);
                }
            }
        }
        None
    }
}

/// Non-adjacent pairs at distance exactly two, i.e. pairs sharing at least
/// one neighbor. These are the only pairs any index is asked to score.
///
/// Output is sorted ascending by `(u, v)`.
pub fn candidate_pairs(graph: &Graph) -> Vec<EdgeRecord> {
    let n = graph.node_count();
    let mut stamp = vec![usize::MAX; n];
    let mut pairs = Vec::new();
    let mut row = Vec::new();
    for u in 0..n {
        stamp[u] = u;
        for &w in graph.neighbors(u) {
            stamp[w] = u;
        }
        row.clear();
        for &w in graph.neighbors(u) {
            for &v in graph.neighbors(w) {
                if v > u && stamp[v] != u {
                    stamp[v] = u;
                    row.push(v);
                }
            }
        }
        row.sort_unstable();
        pairs.extend(row.iter().map(|&v| EdgeRecord { u, v }));
    }
    pairs
}
