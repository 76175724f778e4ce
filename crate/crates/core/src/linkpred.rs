//! Similarity indices for candidate node pairs.
//!
//! Besides the classic local indices (common neighbours, Jaccard, preferential
//! attachment, resource allocation and their within-community variants) this
//! module implements the harmony-based aggregation preferred index:
//!
//! * the *boundary score* of a node is the Shannon entropy of the community
//!   labels found in its neighbourhood, normalized by `ln(degree)`;
//! * its *consistency score* is `1 - boundary`;
//! * the *harmony* of a pair is the mean consistency of the pair's common
//!   neighbours;
//! * the *community size attribute* favours joining small, well-connected
//!   communities, and for pairs inside one community scales with
//!   `sqrt(|C|) / max_i |C_i|`;
//! * the final score is harmony times community size attribute.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{candidate_pairs, connection_matrix, ConnectionMatrix, EdgeRecord, Graph, NodeId, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Ja,
    Pa,
    Cn,
    Cn1,
    Ra,
    Ra1,
    Hap,
}

impl IndexKind {
    pub const ALL: [IndexKind; 7] = [
        IndexKind::Ja,
        IndexKind::Pa,
        IndexKind::Cn,
        IndexKind::Cn1,
        IndexKind::Ra,
        IndexKind::Ra1,
        IndexKind::Hap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Ja => "ja",
            IndexKind::Pa => "pa",
            IndexKind::Cn => "cn",
            IndexKind::Cn1 => "cn1",
            IndexKind::Ra => "ra",
            IndexKind::Ra1 => "ra1",
            IndexKind::Hap => "hap",
        }
    }

    /// Whether the index reads the current partition.
    pub fn uses_communities(self) -> bool {
        matches!(self, IndexKind::Cn1 | IndexKind::Ra1 | IndexKind::Hap)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|kind| kind.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidConfig(format!("unknown index `{s}` (expected one of: {})", names.join(", ")))
            })
    }
}

/// Per-node boundary and consistency scores, `cs = 1 - bs`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeScores {
    boundary: Vec<f64>,
    consistency: Vec<f64>,
}

impl NodeScores {
    pub fn boundary(&self, node: NodeId) -> f64 {
        self.boundary[node]
    }

    pub fn consistency(&self, node: NodeId) -> f64 {
        self.consistency[node]
    }

    pub fn boundary_all(&self) -> &[f64] {
        &self.boundary
    }

    pub fn consistency_all(&self) -> &[f64] {
        &self.consistency
    }
}

/// Normalized entropy of the labels in each node's neighbourhood.
/// Nodes of degree 0 or 1 get a boundary score of 0.
pub fn boundary_scores(graph: &Graph, partition: &Partition) -> NodeScores {
    let n = graph.node_count();
    let mut counts = vec![0usize; partition.community_count()];
    let mut touched = Vec::new();
    let mut boundary = Vec::with_capacity(n);
    for x in 0..n {
        let degree = graph.degree(x);
        if degree <= 1 {
            boundary.push(0.0);
            continue;
        }
        touched.clear();
        for &y in graph.neighbors(x) {
            let c = partition.label(y);
            if counts[c] == 0 {
                touched.push(c);
            }
            counts[c] += 1;
        }
        // fixed summation order
        touched.sort_unstable();
        let d = degree as f64;
        let entropy: f64 = touched
            .iter()
            .map(|&c| {
                let p = counts[c] as f64 / d;
                -p * p.ln()
            })
            .sum();
        for &c in &touched {
            counts[c] = 0;
        }
        boundary.push((entropy / d.ln()).clamp(0.0, 1.0));
    }
    let consistency = boundary.iter().map(|b| 1.0 - b).collect();
    NodeScores { boundary, consistency }
}

/// Distance- and random-walk-based centralities of one node with respect
/// to its own community. These are diagnostics; no index depends on them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCentralities {
    /// Mean BFS distance to the reachable members of the node's community
    /// (itself excluded). `None` when no other member is reachable.
    pub cs_dis: Option<f64>,
    /// Fraction of neighbours in the node's community. `None` for isolated nodes.
    pub cs_rdm: Option<f64>,
    /// Members of the community that could not be reached.
    pub unreachable: usize,
}

pub fn reference_centralities(graph: &Graph, partition: &Partition, node: NodeId) -> ReferenceCentralities {
    let home = partition.label(node);

    let degree = graph.degree(node);
    let cs_rdm = (degree > 0).then(|| {
        let inside = graph
            .neighbors(node)
            .iter()
            .filter(|&&y| partition.label(y) == home)
            .count();
        inside as f64 / degree as f64
    });

    let mut dist = vec![usize::MAX; graph.node_count()];
    let mut queue = VecDeque::from([node]);
    dist[node] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in graph.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let (mut total, mut reached, mut unreachable) = (0usize, 0usize, 0usize);
    for (member, &label) in partition.labels().iter().enumerate() {
        if label != home || member == node {
            continue;
        }
        match dist[member] {
            usize::MAX => unreachable += 1,
            d => {
                total += d;
                reached += 1;
            }
        }
    }
    ReferenceCentralities {
        cs_dis: (reached > 0).then(|| total as f64 / reached as f64),
        cs_rdm,
        unreachable,
    }
}

/// Mean consistency over the common neighbours of `pair`, or `None` when the
/// endpoints share no neighbour.
pub fn harmony(graph: &Graph, scores: &NodeScores, pair: EdgeRecord) -> Option<f64> {
    let (mut sum, mut count) = (0.0, 0usize);
    for z in graph.common_neighbors(pair.u(), pair.v()) {
        sum += scores.consistency(z);
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

/// Community size attribute of a pair of community labels.
///
/// Different communities: inter-community edges over the smaller of the two
/// intra-community edge counts (a zero count is treated as 1).
/// Same community: `sqrt(size) / largest community size`.
pub fn csa(cm: &ConnectionMatrix, community_sizes: &[usize], labels: (usize, usize)) -> f64 {
    let (a, b) = labels;
    if a != b {
        let smaller = cm.intra(a).min(cm.intra(b)).max(1);
        cm.get(a, b) as f64 / smaller as f64
    } else {
        let largest = community_sizes.iter().copied().max().unwrap_or(1).max(1);
        (community_sizes[a] as f64).sqrt() / largest as f64
    }
}

/// A candidate pair with its index value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredPair {
    pub pair: EdgeRecord,
    pub score: f64,
}

/// Everything an index needs, computed once per partition.
#[derive(Debug, Clone)]
pub struct ScoringContext<'a> {
    graph: &'a Graph,
    partition: &'a Partition,
    cm: ConnectionMatrix,
    node_scores: NodeScores,
    sizes: Vec<usize>,
}

impl<'a> ScoringContext<'a> {
    pub fn new(graph: &'a Graph, partition: &'a Partition) -> Self {
        Self {
            graph,
            partition,
            cm: connection_matrix(graph, partition),
            node_scores: boundary_scores(graph, partition),
            sizes: partition.sizes(),
        }
    }

    pub fn connection_matrix(&self) -> &ConnectionMatrix {
        &self.cm
    }

    pub fn node_scores(&self) -> &NodeScores {
        &self.node_scores
    }

    pub fn score(&self, index: IndexKind, pair: EdgeRecord) -> f64 {
        score_with(
            index,
            self.graph,
            self.partition,
            &self.cm,
            &self.node_scores,
            &self.sizes,
            pair,
        )
    }
}

/// Scores a single pair. Prefer [`ScoringContext`] or [`score_all`] when
/// scoring many pairs against the same partition.
pub fn score(
    index: IndexKind,
    graph: &Graph,
    partition: &Partition,
    cm: &ConnectionMatrix,
    node_scores: &NodeScores,
    pair: EdgeRecord,
) -> f64 {
    score_with(index, graph, partition, cm, node_scores, &partition.sizes(), pair)
}

fn score_with(
    index: IndexKind,
    graph: &Graph,
    partition: &Partition,
    cm: &ConnectionMatrix,
    node_scores: &NodeScores,
    sizes: &[usize],
    pair: EdgeRecord,
) -> f64 {
    let (x, y) = pair.endpoints();
    let common = || graph.common_neighbors(x, y);
    // common neighbours z with label(z) == label(x) == label(y)
    let same_community = || {
        let lx = partition.label(x);
        let shared = lx == partition.label(y);
        common().filter(move |&z| shared && partition.label(z) == lx)
    };
    let inverse_degree = |z: NodeId| 1.0 / graph.degree(z) as f64;
    match index {
        IndexKind::Cn => common().count() as f64,
        IndexKind::Ja => {
            let shared = common().count();
            let union = graph.degree(x) + graph.degree(y) - shared;
            if union == 0 {
                0.0
            } else {
                shared as f64 / union as f64
            }
        }
        IndexKind::Pa => (graph.degree(x) * graph.degree(y)) as f64,
        IndexKind::Ra => common().map(inverse_degree).sum(),
        IndexKind::Cn1 => (common().count() + same_community().count()) as f64,
        IndexKind::Ra1 => common().map(inverse_degree).sum::<f64>() + same_community().map(inverse_degree).sum::<f64>(),
        IndexKind::Hap => {
            let hm = harmony(graph, node_scores, pair).unwrap_or(0.0);
            hm * csa(cm, sizes, (partition.label(x), partition.label(y)))
        }
    }
}

/// Descending score, then ascending pair.
pub fn ranking_order(a: &ScoredPair, b: &ScoredPair) -> std::cmp::Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.pair.cmp(&b.pair))
}

/// Scores every candidate pair of `graph` and returns them best first.
pub fn score_all(index: IndexKind, graph: &Graph, partition: &Partition) -> Vec<ScoredPair> {
    let context = ScoringContext::new(graph, partition);
    let mut scored: Vec<ScoredPair> = candidate_pairs(graph)
        .into_par_iter()
        .map(|pair| ScoredPair {
            pair,
            score: context.score(index, pair),
        })
        .collect();
    scored.sort_by(ranking_order);
    scored
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: usize, b: usize) -> EdgeRecord {
        EdgeRecord::new(a, b).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)])
    }

    /// Star around `center` whose leaves carry the given labels; the centre
    /// takes the first label.
    fn star(leaf_labels: &[usize]) -> (Graph, Partition) {
        let n = leaf_labels.len() + 1;
        let g = Graph::from_edges(n, (1..n).map(|leaf| (0, leaf)));
        let labels = std::iter::once(leaf_labels[0]).chain(leaf_labels.iter().copied());
        (g, Partition::from_labels(labels))
    }

    #[test]
    fn boundary_of_two_even_groups() {
        let (g, p) = star(&[1, 1, 1, 1, 2, 2, 2, 2]);
        let s = boundary_scores(&g, &p);
        assert!((s.boundary(0) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_of_three_groups() {
        let (g, p) = star(&[1, 1, 1, 1, 2, 2, 3, 3]);
        let s = boundary_scores(&g, &p);
        assert!((s.boundary(0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn low_degree_and_pure_neighbourhoods() {
        let (g, p) = star(&[4, 4, 4]);
        let s = boundary_scores(&g, &p);
        assert_eq!(s.boundary(0), 0.0);
        for leaf in 1..4 {
            assert_eq!(s.boundary(leaf), 0.0);
            assert_eq!(s.consistency(leaf), 1.0);
        }
    }

    #[test]
    fn random_walk_centrality_of_foreign_neighbourhood() {
        let (g, _) = star(&[1, 2, 2]);
        let p = Partition::from_labels([0, 1, 1, 1]);
        let rc = reference_centralities(&g, &p, 0);
        assert_eq!(rc.cs_rdm, Some(0.0));
        assert_eq!(rc.cs_dis, None);
    }

    #[test]
    fn unreachable_members_are_counted() {
        let g = Graph::from_edges(4, [(0, 1)]);
        let p = Partition::from_labels([0, 0, 0, 1]);
        let rc = reference_centralities(&g, &p, 0);
        assert_eq!(rc.cs_dis, Some(1.0));
        assert_eq!(rc.unreachable, 1);
    }

    #[test]
    fn harmony_means() {
        let g = path3();
        let s = boundary_scores(&g, &Partition::uniform(3));
        assert_eq!(harmony(&g, &s, pair(0, 2)), Some(1.0));
        assert_eq!(harmony(&g, &s, pair(0, 1)), None);

        // 0 and 3 share neighbours 1 (pure) and 2 (boundary between two labels)
        let g = Graph::from_edges(5, [(0, 1), (1, 3), (0, 2), (2, 3), (2, 4)]);
        let p = Partition::from_labels([0, 0, 1, 0, 1]);
        let s = boundary_scores(&g, &p);
        assert_eq!(s.consistency(1), 1.0);
        let expected = (1.0 + s.consistency(2)) / 2.0;
        assert!((harmony(&g, &s, pair(0, 3)).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn harmony_of_pure_and_split_neighbours() {
        let g = Graph::from_edges(4, [(0, 2), (1, 2), (0, 3), (1, 3)]);
        let s = NodeScores {
            boundary: vec![0.0, 0.0, 0.0, 1.0],
            consistency: vec![1.0, 1.0, 1.0, 0.0],
        };
        assert_eq!(harmony(&g, &s, pair(0, 1)), Some(0.5));
    }

    #[test]
    fn csa_branches() {
        // communities {0..4} with 4 intra edges, {5..9} with 10, two bridges
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        edges.extend((5..10).flat_map(|a| (a + 1..10).map(move |b| (a, b))));
        edges.extend([(0, 5), (1, 6)]);
        let g = Graph::from_edges(10, edges);
        let p = Partition::from_labels([0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let cm = connection_matrix(&g, &p);
        assert_eq!(csa(&cm, &p.sizes(), (0, 1)), 0.5);
        assert!((csa(&cm, &p.sizes(), (1, 1)) - 5f64.sqrt() / 5.0).abs() < 1e-15);
    }

    #[test]
    fn csa_zero_intra_guard() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let p = Partition::from_labels([0, 1, 2]);
        let cm = connection_matrix(&g, &p);
        assert_eq!(csa(&cm, &p.sizes(), (0, 1)), 1.0);
        assert_eq!(csa(&cm, &p.sizes(), (0, 2)), 0.0);
    }

    #[test]
    fn baselines_on_path() {
        let g = path3();
        let p = Partition::uniform(3);
        let ctx = ScoringContext::new(&g, &p);
        let e = pair(0, 2);
        assert_eq!(ctx.score(IndexKind::Cn, e), 1.0);
        assert_eq!(ctx.score(IndexKind::Ja, e), 1.0);
        assert_eq!(ctx.score(IndexKind::Ra, e), 0.5);
        assert_eq!(ctx.score(IndexKind::Pa, e), 1.0);
        assert_eq!(ctx.score(IndexKind::Cn1, e), 2.0);
        assert_eq!(ctx.score(IndexKind::Ra1, e), 1.0);
        assert!((ctx.score(IndexKind::Hap, e) - 3f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn community_variants_ignore_split_pairs() {
        let g = path3();
        let p = Partition::from_labels([0, 0, 1]);
        let ctx = ScoringContext::new(&g, &p);
        assert_eq!(ctx.score(IndexKind::Cn1, pair(0, 2)), 1.0);
        assert_eq!(ctx.score(IndexKind::Ra1, pair(0, 2)), 0.5);
    }

    #[test]
    fn free_score_matches_context() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 1)]);
        let p = Partition::from_labels([0, 0, 0, 1, 1, 1]);
        let ctx = ScoringContext::new(&g, &p);
        for index in IndexKind::ALL {
            for e in candidate_pairs(&g) {
                let direct = score(index, &g, &p, ctx.connection_matrix(), ctx.node_scores(), e);
                assert_eq!(direct, ctx.score(index, e));
            }
        }
    }

    #[test]
    fn score_all_shapes() {
        let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert!(score_all(IndexKind::Hap, &triangle, &Partition::uniform(3)).is_empty());

        let scored = score_all(IndexKind::Ra, &path3(), &Partition::uniform(3));
        assert_eq!(scored.len(), 1);
        assert_eq!(scored[0].pair, pair(0, 2));
    }

    #[test]
    fn ties_break_by_pair() {
        // square: both diagonals have identical scores
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let scored = score_all(IndexKind::Cn, &g, &Partition::uniform(4));
        let pairs: Vec<_> = scored.iter().map(|s| s.pair.endpoints()).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn index_names() {
        for kind in IndexKind::ALL {
            assert_eq!(kind.to_string().parse::<IndexKind>().unwrap(), kind);
        }
        assert_eq!("HAP".parse::<IndexKind>().unwrap(), IndexKind::Hap);
        assert!("katz".parse::<IndexKind>().is_err());
    }
}
