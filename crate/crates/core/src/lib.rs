//! Community structure enhancement through link prediction.
//!
//! The crate bundles everything needed to run the enhancement loop on an
//! undirected graph:
//!
//! - [`graph`]: adjacency-set graphs, partitions, connection matrices,
//!   edge-list and label-file parsing, candidate pairs.
//! - [`detect`]: label propagation and Louvain behind the [`detect::Detector`] trait.
//! - [`linkpred`]: the harmony-based index and six local baselines.
//! - [`enhance`]: the score / add / re-detect loop with early stopping.
//! - [`metrics`]: NMI and trace summaries.
//!
//! ```
//! use commenhance::{enhance, graph::Graph, EnhanceConfig};
//!
//! let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]);
//! let out = enhance::run(&g, &EnhanceConfig::default(), None).unwrap();
//! assert_eq!(out.graph.edge_count(), g.edge_count() + out.trace.iter().map(|r| r.added_edges.len()).sum::<usize>());
//! ```

pub mod detect;
pub mod enhance;
mod error;
pub mod graph;
pub mod linkpred;
pub mod metrics;

pub use detect::{DetectorConfig, DetectorKind};
pub use enhance::EnhanceConfig;
pub use error::{Error, Result};
pub use linkpred::IndexKind;
