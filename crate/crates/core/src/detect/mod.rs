//! Community detection behind a small trait so the enhancement loop can treat
//! the detector as a black box.

mod louvain;
mod lpa;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

pub use louvain::louvain;
pub use lpa::lpa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Lpa,
    Louvain,
    /// Provided by the caller, e.g. a subprocess wrapper.
    External,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] = [DetectorKind::Lpa, DetectorKind::Louvain, DetectorKind::External];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Lpa => "lpa",
            DetectorKind::Louvain => "louvain",
            DetectorKind::External => "external",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|kind| kind.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown detector `{s}` (expected one of: lpa, louvain, external)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub algorithm: DetectorKind,
    pub seed: u64,
    /// Upper bound on label propagation sweeps.
    pub max_sweeps: usize,
    /// Louvain resolution; 1.0 is plain modularity.
    pub resolution: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            algorithm: DetectorKind::Louvain,
            seed: 0,
            max_sweeps: 100,
            resolution: 1.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be at least 1".into()));
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::InvalidConfig("resolution must be positive".into()));
        }
        Ok(())
    }
}

/// Anything that maps a graph to a partition. `seed` carries all randomness.
pub trait Detector {
    fn detect(&self, graph: &Graph, seed: u64) -> Result<Partition>;
}

/// The built-in detector selected by `config`, ignoring `config.seed`
/// in favor of the per-call seed.
#[derive(Debug, Clone)]
pub struct BuiltinDetector {
    config: DetectorConfig,
}

impl BuiltinDetector {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        if config.algorithm == DetectorKind::External {
            return Err(Error::InvalidConfig(
                "the external detector needs a command; it has no built-in implementation".into(),
            ));
        }
        Ok(Self { config })
    }
}

impl Detector for BuiltinDetector {
    fn detect(&self, graph: &Graph, seed: u64) -> Result<Partition> {
        let config = DetectorConfig {
            seed,
            ..self.config.clone()
        };
        match config.algorithm {
            DetectorKind::Lpa => lpa(graph, &config),
            DetectorKind::Louvain => louvain(graph, &config),
            DetectorKind::External => unreachable!("rejected in BuiltinDetector::new"),
        }
    }
}

/// Runs the configured built-in detector once with `config.seed`.
pub fn detect(graph: &Graph, config: &DetectorConfig) -> Result<Partition> {
    BuiltinDetector::new(config.clone())?.detect(graph, config.seed)
}

/// Newman-Girvan modularity, `sum_c e_c/m - (d_c/2m)^2`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if partition.len() != graph.node_count() {
        return Err(Error::SizeMismatch {
            expected: graph.node_count(),
            found: partition.len(),
        });
    }
    let k = partition.community_count();
    let mut intra = vec![0u64; k];
    let mut degree = vec![0u64; k];
    for node in 0..graph.node_count() {
        degree[partition.label(node)] += graph.degree(node) as u64;
    }
    for edge in graph.edges() {
        let c = partition.label(edge.u());
        if c == partition.label(edge.v()) {
            intra[c] += 1;
        }
    }
    let m = graph.edge_count() as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| {
            let share = d as f64 / (2.0 * m);
            e as f64 / m - share * share
        })
        .sum())
}
