use std::fs;
use std::path::{Path, PathBuf};

use commenhance::graph::{parse_edge_list, parse_labels, Graph, Partition};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileIdentity {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub edges: FileIdentity,
    pub labels: Option<FileIdentity>,
    pub nodes: usize,
    pub edge_count: usize,
    /// Self-loops and duplicate records dropped while loading.
    pub dropped_records: usize,
}

/// A graph, its optional ground truth, and where both came from.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: Graph,
    pub truth: Option<Partition>,
    pub info: DatasetInfo,
}

fn read_hashed(path: &Path) -> Result<(String, FileIdentity)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let sha256 = format!("{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::parse(path, "file is not valid UTF-8"))?;
    let identity = FileIdentity {
        path: path.to_path_buf(),
        sha256,
    };
    Ok((text, identity))
}

impl Dataset {
    pub fn load(edges: &Path, labels: Option<&Path>) -> Result<Self> {
        let (text, edge_identity) = read_hashed(edges)?;
        let load = parse_edge_list(&text).map_err(|e| CliError::reading(edges, e))?;
        let (truth, label_identity) = match labels {
            Some(path) => {
                let (text, identity) = read_hashed(path)?;
                let truth = parse_labels(&text, &load.graph).map_err(|e| CliError::reading(path, e))?;
                (Some(truth), Some(identity))
            }
            None => (None, None),
        };
        let info = DatasetInfo {
            edges: edge_identity,
            labels: label_identity,
            nodes: load.graph.node_count(),
            edge_count: load.graph.edge_count(),
            dropped_records: load.dropped(),
        };
        Ok(Self {
            graph: load.graph,
            truth,
            info,
        })
    }

    /// Fails unless the files on disk still hash to the recorded digests.
    pub fn load_verified(info: &DatasetInfo) -> Result<Self> {
        let dataset = Self::load(&info.edges.path, info.labels.as_ref().map(|l| l.path.as_path()))?;
        if dataset.info != *info {
            return Err(CliError::Usage(format!(
                "dataset {} changed since the report was written",
                info.edges.path.display()
            )));
        }
        Ok(dataset)
    }
}
