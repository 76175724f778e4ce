//! Community detection delegated to a child process.
//!
//! The command template must contain `{input}` and `{output}`; `{seed}` is
//! optional. The graph is written to `{input}` as a named edge list, the
//! command runs under `sh -c`, and `{output}` must then hold one
//! `node community` line per node.

use std::fs;
use std::process::Command;

use commenhance::detect::Detector;
use commenhance::graph::{parse_labels, write_edge_list, Graph, Partition};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("external command template must contain {{input}} and {{output}}: `{0}`")]
    Template(String),

    #[error("external detector I/O failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("external detector exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },

    #[error("external detector produced unusable labels: {0}")]
    Output(commenhance::Error),
}

#[derive(Debug, Clone)]
pub struct ExternalDetector {
    template: String,
}

impl ExternalDetector {
    pub fn new(template: impl Into<String>) -> Result<Self, ExternalError> {
        let template = template.into();
        if !template.contains("{input}") || !template.contains("{output}") {
            return Err(ExternalError::Template(template));
        }
        Ok(Self { template })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    fn run(&self, graph: &Graph, seed: u64) -> Result<Partition, ExternalError> {
        let dir = tempfile::tempdir()?;
        let input = dir.path().join("graph.edges");
        let output = dir.path().join("communities.labels");
        let mut file = fs::File::create(&input)?;
        write_edge_list(graph, &mut file)?;
        drop(file);

        let command = self
            .template
            .replace("{input}", &quote(&input.to_string_lossy()))
            .replace("{output}", &quote(&output.to_string_lossy()))
            .replace("{seed}", &seed.to_string());
        let result = Command::new("sh").arg("-c").arg(&command).output()?;
        if !result.status.success() {
            return Err(ExternalError::Failed {
                status: result.status.to_string(),
                stderr: String::from_utf8_lossy(&result.stderr).trim().to_string(),
            });
        }
        let text = fs::read_to_string(&output)?;
        parse_labels(&text, graph).map_err(ExternalError::Output)
    }
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

impl Detector for ExternalDetector {
    fn detect(&self, graph: &Graph, seed: u64) -> commenhance::Result<Partition> {
        self.run(graph, seed)
            .map_err(|e| commenhance::Error::Detector(Box::new(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)])
    }

    #[test]
    fn template_needs_placeholders() {
        assert!(matches!(
            ExternalDetector::new("cat {input}"),
            Err(ExternalError::Template(_))
        ));
    }

    #[test]
    fn copies_a_label_file() {
        let dir = tempfile::tempdir().unwrap();
        let fixed = dir.path().join("fixed.labels");
        fs::write(&fixed, "0 a\n1 a\n2 b\n").unwrap();
        let det = ExternalDetector::new(format!("cp {} {{output}} # {{input}}", fixed.display())).unwrap();
        let p = det.detect(&path3(), 0).unwrap();
        assert_eq!(p.labels(), [0, 0, 1]);
    }

    #[test]
    fn nonzero_exit_carries_stderr() {
        let det = ExternalDetector::new("echo boom >&2; exit 3 # {input} {output}").unwrap();
        match det.run(&path3(), 0) {
            Err(ExternalError::Failed { stderr, .. }) => assert_eq!(stderr, "boom"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_node_is_named() {
        let det = ExternalDetector::new("printf '0 x\\n1 x\\n' > {output} # {input}").unwrap();
        match det.run(&path3(), 0) {
            Err(ExternalError::Output(commenhance::Error::MissingNodes(names))) => assert_eq!(names, ["2"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seed_is_substituted() {
        let det =
            ExternalDetector::new("awk '{print $1, {seed}; print $2, {seed}}' {input} | sort -u > {output}").unwrap();
        let p = det.detect(&path3(), 7).unwrap();
        assert_eq!(p.community_count(), 1);
    }
}
