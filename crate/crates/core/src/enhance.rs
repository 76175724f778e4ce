//! The iterative enhancement loop: detect communities, score candidate
//! pairs against the detection, add the best `L` pairs as edges, detect
//! again, and stop once detections have settled.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{BuiltinDetector, Detector, DetectorConfig};
use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Graph, Partition};
use crate::linkpred::{score_all, IndexKind, ScoredPair};
use crate::metrics::nmi;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnhanceConfig {
    pub index: IndexKind,
    pub detector: DetectorConfig,
    /// Edges added per iteration (`L`).
    pub edges_per_iteration: usize,
    /// Maximum number of add-and-detect iterations (`N`).
    pub max_iterations: usize,
    /// Number of previous detections compared against the latest (`R`).
    pub early_stop_rounds: usize,
    /// Stop when every one of those NMI values exceeds this (`delta`).
    /// A threshold of 1 never fires.
    pub early_stop_threshold: f64,
    /// Source of the per-iteration detector seeds.
    pub seed: u64,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self {
            index: IndexKind::Hap,
            detector: DetectorConfig::default(),
            edges_per_iteration: 10,
            max_iterations: 10,
            early_stop_rounds: 3,
            early_stop_threshold: 0.95,
            seed: 0,
        }
    }
}

impl EnhanceConfig {
    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        if self.edges_per_iteration == 0 {
            return Err(Error::InvalidConfig(
                "edges per iteration (L) must be at least 1".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max iterations (N) must be at least 1".into()));
        }
        if self.early_stop_rounds == 0 {
            return Err(Error::InvalidConfig("early-stop rounds (R) must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.early_stop_threshold) {
            return Err(Error::InvalidConfig("early-stop threshold must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// How an added edge relates to the ground truth and to the detection it
/// was scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    /// Same true community, split by the detection.
    Revising,
    /// Same true community, already together in the detection.
    Reinforcing,
    /// Endpoints in different true communities.
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AddedEdge {
    pub edge: EdgeRecord,
    pub score: f64,
    pub class: Option<EdgeClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub partition: Partition,
    /// Edges added before this detection; empty for iteration 0.
    pub added_edges: Vec<AddedEdge>,
    pub nmi_vs_ground_truth: Option<f64>,
    pub cluster_count: usize,
    /// NMI against the previous detection; `None` for iteration 0.
    pub nmi_vs_previous: Option<f64>,
    /// Fewer than `L` candidates were left when this record was produced.
    pub candidates_exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct Enhancement {
    pub graph: Graph,
    pub partition: Partition,
    pub trace: Vec<IterationRecord>,
    pub stopped_early: bool,
}

/// The first `min(l, scored.len())` entries of an already ranked list.
pub fn select_top_l(scored: &[ScoredPair], l: usize) -> &[ScoredPair] {
    &scored[..l.min(scored.len())]
}

pub fn classify_edge(edge: EdgeRecord, ground_truth: &Partition, detected: &Partition) -> EdgeClass {
    let (u, v) = edge.endpoints();
    if ground_truth.label(u) != ground_truth.label(v) {
        EdgeClass::Noise
    } else if detected.label(u) == detected.label(v) {
        EdgeClass::Reinforcing
    } else {
        EdgeClass::Revising
    }
}

/// Classifies edges against the ground truth and the detection they were
/// scored on (the one before the edges were added).
pub fn classify_added_edges(edges: &[EdgeRecord], ground_truth: &Partition, detected: &Partition) -> Vec<EdgeClass> {
    edges
        .iter()
        .map(|&edge| classify_edge(edge, ground_truth, detected))
        .collect()
}

/// True once the latest detection agrees with each of the `rounds` detections
/// before it at NMI above `threshold`.
pub fn early_stop(history: &[Partition], rounds: usize, threshold: f64) -> Result<bool> {
    if rounds == 0 || history.len() < rounds + 1 {
        return Ok(false);
    }
    let (latest, earlier) = history.split_last().expect("non-empty history");
    let mut min = f64::INFINITY;
    for previous in &earlier[earlier.len() - rounds..] {
        min = min.min(nmi(previous, latest)?);
    }
    Ok(min > threshold)
}

/// Runs the loop with the built-in detector named in `config.detector`.
pub fn run(graph: &Graph, config: &EnhanceConfig, ground_truth: Option<&Partition>) -> Result<Enhancement> {
    let detector = BuiltinDetector::new(config.detector.clone())?;
    run_with(graph, config, &detector, ground_truth)
}

/// Runs the loop with any detector. The input graph is left untouched; the
/// detector seed for iteration `t` is the `t`-th draw of a generator seeded
/// with `config.seed`.
pub fn run_with(
    graph: &Graph,
    config: &EnhanceConfig,
    detector: &dyn Detector,
    ground_truth: Option<&Partition>,
) -> Result<Enhancement> {
    config.validate()?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if let Some(truth) = ground_truth {
        if truth.len() != graph.node_count() {
            return Err(Error::SizeMismatch {
                expected: graph.node_count(),
                found: truth.len(),
            });
        }
    }
    let truth_nmi = |p: &Partition| ground_truth.map(|t| nmi(p, t)).transpose();
    let mut seeds = ChaCha8Rng::seed_from_u64(config.seed);

    let mut current_graph = graph.clone();
    let mut current = detector.detect(&current_graph, seeds.next_u64())?;
    check_cover(&current, graph)?;
    let mut trace = vec![IterationRecord {
        iteration: 0,
        cluster_count: current.community_count(),
        nmi_vs_ground_truth: truth_nmi(&current)?,
        nmi_vs_previous: None,
        added_edges: Vec::new(),
        partition: current.clone(),
        candidates_exhausted: false,
    }];
    let mut history = vec![current.clone()];
    let mut stopped_early = false;

    for iteration in 1..=config.max_iterations {
        let scored = score_all(config.index, &current_graph, &current);
        if scored.is_empty() {
            if let Some(last) = trace.last_mut() {
                last.candidates_exhausted = true;
            }
            break;
        }
        let chosen = select_top_l(&scored, config.edges_per_iteration);
        let added_edges: Vec<AddedEdge> = chosen
            .iter()
            .map(|s| AddedEdge {
                edge: s.pair,
                score: s.score,
                class: ground_truth.map(|t| classify_edge(s.pair, t, &current)),
            })
            .collect();
        for added in &added_edges {
            let inserted = current_graph.add_edge(added.edge.u(), added.edge.v());
            debug_assert!(inserted, "candidate pairs are non-edges");
        }

        let next = detector.detect(&current_graph, seeds.next_u64())?;
        check_cover(&next, graph)?;
        trace.push(IterationRecord {
            iteration,
            cluster_count: next.community_count(),
            nmi_vs_ground_truth: truth_nmi(&next)?,
            nmi_vs_previous: Some(nmi(&current, &next)?),
            candidates_exhausted: added_edges.len() < config.edges_per_iteration,
            added_edges,
            partition: next.clone(),
        });
        current = next;
        history.push(current.clone());
        if early_stop(&history, config.early_stop_rounds, config.early_stop_threshold)? {
            stopped_early = true;
            break;
        }
    }

    Ok(Enhancement {
        graph: current_graph,
        partition: current,
        trace,
        stopped_early,
    })
}

fn check_cover(partition: &Partition, graph: &Graph) -> Result<()> {
    if partition.len() == graph.node_count() {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            expected: graph.node_count(),
            found: partition.len(),
        })
    }
}
