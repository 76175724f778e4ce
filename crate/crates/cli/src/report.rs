use std::io::Write;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use commenhance::detect::{BuiltinDetector, Detector};
use commenhance::enhance::{run_with, EdgeClass, Enhancement};
use commenhance::metrics::{improvement, revising_fraction, DeltaSign};
use commenhance::{DetectorKind, EnhanceConfig};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, DatasetInfo};
use crate::error::{CliError, Result};
use crate::external::ExternalDetector;

pub const FORMAT: &str = "commenhance-run/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "commenhance".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// Everything needed to repeat a run on the same dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub enhance: EnhanceConfig,
    pub external_cmd: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AddedRow {
    pub u: String,
    pub v: String,
    pub score: f64,
    pub class: Option<EdgeClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub nmi: Option<f64>,
    pub nmi_vs_previous: Option<f64>,
    pub clusters: usize,
    /// Cumulative class counts up to and including this iteration.
    pub revising: Option<usize>,
    pub reinforcing: Option<usize>,
    pub noise: Option<usize>,
    pub candidates_exhausted: bool,
    pub added: Vec<AddedRow>,
    /// Community label of every node, in node order.
    pub partition: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub iterations: usize,
    pub added_edges: usize,
    pub stopped_early: bool,
    pub initial_clusters: usize,
    pub final_clusters: usize,
    pub initial_nmi: Option<f64>,
    pub final_nmi: Option<f64>,
    pub best_nmi: Option<f64>,
    pub delta_sign: Option<DeltaSign>,
    pub revising_fraction: Option<f64>,
    pub reinforcing_fraction: Option<f64>,
    pub noise_fraction: Option<f64>,
}

/// The only fields that differ between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds since the Unix epoch.
    pub generated_at: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: String,
    pub tool: ToolInfo,
    pub config: RunConfig,
    pub dataset: DatasetInfo,
    pub trace: Vec<TraceRow>,
    pub summary: Summary,
    pub timing: Timing,
}

pub fn detector_for(config: &RunConfig) -> Result<Box<dyn Detector + Sync>> {
    match (config.enhance.detector.algorithm, &config.external_cmd) {
        (DetectorKind::External, Some(cmd)) => {
            Ok(Box::new(ExternalDetector::new(cmd.clone()).map_err(CliError::Child)?))
        }
        (DetectorKind::External, None) => Err(CliError::Usage("--detector external requires --external-cmd".into())),
        _ => Ok(Box::new(BuiltinDetector::new(config.enhance.detector.clone())?)),
    }
}

/// Runs the enhancement loop on `dataset` and wraps the outcome in a report.
pub fn execute(dataset: &Dataset, config: &RunConfig) -> Result<(RunReport, Enhancement)> {
    let detector = detector_for(config)?;
    let start = Instant::now();
    let outcome = run_with(
        &dataset.graph,
        &config.enhance,
        detector.as_ref(),
        dataset.truth.as_ref(),
    )?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let report = RunReport::new(config.clone(), dataset, &outcome, wall_seconds)?;
    Ok((report, outcome))
}

/// Re-runs a report's configuration against its dataset, which must be unchanged.
pub fn reproduce(report: &RunReport) -> Result<RunReport> {
    let dataset = Dataset::load_verified(&report.dataset)?;
    Ok(execute(&dataset, &report.config)?.0)
}

impl RunReport {
    pub fn new(config: RunConfig, dataset: &Dataset, outcome: &Enhancement, wall_seconds: f64) -> Result<Self> {
        let graph = &outcome.graph;
        let has_truth = dataset.truth.is_some();
        let cumulative = if has_truth {
            Some(revising_fraction(&outcome.trace)?)
        } else {
            None
        };
        let trace = outcome
            .trace
            .iter()
            .enumerate()
            .map(|(i, record)| {
                let point = cumulative.as_ref().map(|c| c.cumulative[i]);
                TraceRow {
                    iteration: record.iteration,
                    nmi: record.nmi_vs_ground_truth,
                    nmi_vs_previous: record.nmi_vs_previous,
                    clusters: record.cluster_count,
                    revising: point.map(|p| p.revising),
                    reinforcing: point.map(|p| p.reinforcing),
                    noise: point.map(|p| p.noise),
                    candidates_exhausted: record.candidates_exhausted,
                    added: record
                        .added_edges
                        .iter()
                        .map(|a| AddedRow {
                            u: graph.node_name(a.edge.u()),
                            v: graph.node_name(a.edge.v()),
                            score: a.score,
                            class: a.class,
                        })
                        .collect(),
                    partition: record.partition.labels().to_vec(),
                }
            })
            .collect::<Vec<_>>();

        let first = &outcome.trace[0];
        let last = outcome.trace.last().unwrap_or(first);
        let gain = if has_truth {
            Some(improvement(&outcome.trace)?)
        } else {
            None
        };
        let summary = Summary {
            iterations: outcome.trace.len() - 1,
            added_edges: outcome.trace.iter().map(|r| r.added_edges.len()).sum(),
            stopped_early: outcome.stopped_early,
            initial_clusters: first.cluster_count,
            final_clusters: last.cluster_count,
            initial_nmi: gain.map(|g| g.initial_nmi),
            final_nmi: gain.map(|g| g.final_nmi),
            best_nmi: gain.map(|g| g.best_nmi),
            delta_sign: gain.map(|g| g.delta_sign),
            revising_fraction: cumulative.as_ref().map(|c| c.revising),
            reinforcing_fraction: cumulative.as_ref().map(|c| c.reinforcing),
            noise_fraction: cumulative.as_ref().map(|c| c.noise),
        };
        let generated_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);

        Ok(Self {
            format: FORMAT.into(),
            tool: ToolInfo::current(),
            config,
            dataset: dataset.info.clone(),
            trace,
            summary,
            timing: Timing {
                generated_at,
                wall_seconds,
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Per-iteration table with a header row; empty cells where no ground
    /// truth was available.
    pub fn write_table<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record([
            "iteration",
            "nmi",
            "clusters",
            "added",
            "revising",
            "reinforcing",
            "noise",
            "nmi_vs_previous",
        ])?;
        fn cell<T: ToString>(value: Option<T>) -> String {
            value.map(|v| v.to_string()).unwrap_or_default()
        }
        for row in &self.trace {
            writer.write_record([
                row.iteration.to_string(),
                cell(row.nmi),
                row.clusters.to_string(),
                row.added.len().to_string(),
                cell(row.revising),
                cell(row.reinforcing),
                cell(row.noise),
                cell(row.nmi_vs_previous),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }
}
