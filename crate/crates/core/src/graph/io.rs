use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use super::{Graph, NodeId, Partition};
use crate::error::{Error, Result};

/// A parsed edge list together with the records that were dropped.
#[derive(Debug, Clone)]
pub struct EdgeListLoad {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl EdgeListLoad {
    pub fn dropped(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Yields `(line_number, tokens)` for every non-blank, non-comment line.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(idx, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((idx + 1, line.split_whitespace().collect()))
        }
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeListLoad> {
    parse_edge_list(&read(path.as_ref())?)
}

/// Parses whitespace-separated `a b` records. Node ids are assigned in order
/// of first appearance; extra tokens on a line are ignored.
pub fn parse_edge_list(text: &str) -> Result<EdgeListLoad> {
    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    for (line, tokens) in records(text) {
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two node names, found {}", tokens.len()),
            });
        }
        let mut endpoints = [0; 2];
        for (slot, &name) in endpoints.iter_mut().zip(&tokens[..2]) {
            let next = names.len();
            *slot = *ids.entry(name).or_insert_with(|| {
                names.push(name.to_string());
                next
            });
        }
        pairs.push((endpoints[0], endpoints[1]));
    }

    let mut graph = Graph::new(names.len());
    let mut self_loops = 0;
    let mut duplicates = 0;
    for (a, b) in pairs {
        if a == b {
            self_loops += 1;
        } else if !graph.add_edge(a, b) {
            duplicates += 1;
        }
    }
    Ok(EdgeListLoad {
        graph: graph.with_names(names),
        self_loops,
        duplicates,
    })
}

pub fn load_labels(path: impl AsRef<Path>, graph: &Graph) -> Result<Partition> {
    parse_labels(&read(path.as_ref())?, graph)
}

/// Parses `node_name label` records. Every node of `graph` must be assigned
/// exactly once; labels are arbitrary strings.
pub fn parse_labels(text: &str, graph: &Graph) -> Result<Partition> {
    let mut assigned: Vec<Option<&str>> = vec![None; graph.node_count()];
    for (line, tokens) in records(text) {
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line,
                message: "expected `node_name label`".to_string(),
            });
        }
        let name = tokens[0];
        let node = graph.node_by_name(name).ok_or_else(|| Error::UnknownNode {
            line,
            name: name.to_string(),
        })?;
        if assigned[node].replace(tokens[1]).is_some() {
            return Err(Error::DuplicateAssignment {
                line,
                name: name.to_string(),
            });
        }
    }
    let missing: Vec<String> = assigned
        .iter()
        .enumerate()
        .filter(|(_, label)| label.is_none())
        .map(|(node, _)| graph.node_name(node))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingNodes(missing));
    }
    Ok(Partition::from_labels(assigned.into_iter().flatten()))
}

/// Writes one `u v` line per edge using the graph's node names.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    for edge in graph.edges() {
        writeln!(out, "{} {}", graph.node_name(edge.u()), graph.node_name(edge.v()))?;
    }
    Ok(())
}
