use std::fs;
use std::path::{Path, PathBuf};

use commenhance::metrics::DeltaSign;
use commenhance::{DetectorKind, IndexKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{CliError, Result};
use crate::plan::Job;
use crate::report::{execute, RunReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub run: String,
    pub exit_code: i32,
    pub message: String,
}

/// Seed-level statistics for one (dataset, index, detector, L, N, delta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub dataset: String,
    pub index: IndexKind,
    pub detector: DetectorKind,
    pub l: usize,
    pub n: usize,
    pub delta: f64,
    pub runs: usize,
    pub initial_nmi_median: Option<f64>,
    pub final_nmi_min: Option<f64>,
    pub final_nmi_median: Option<f64>,
    pub final_nmi_max: Option<f64>,
    /// Highest NMI seen in any iteration of any seed.
    pub best_nmi: Option<f64>,
    /// Sign of median final minus median initial NMI.
    pub delta_sign: Option<DeltaSign>,
    pub revising_fraction_mean: Option<f64>,
    pub reinforcing_fraction_mean: Option<f64>,
    pub noise_fraction_mean: Option<f64>,
    pub final_clusters_median: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub reports: Vec<RunReport>,
    pub failures: Vec<Failure>,
    pub aggregate: Vec<AggregateRow>,
}

pub fn dataset_name(report: &RunReport) -> String {
    let path = &report.dataset.edges.path;
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Collects `Some` values, or `None` if any is missing.
fn all<T: Copy>(values: impl Iterator<Item = Option<T>>) -> Option<Vec<T>> {
    values.collect()
}

/// Groups reports by configuration (seed aside) in first-appearance order.
pub fn aggregate(reports: &[RunReport]) -> Vec<AggregateRow> {
    type Key = (String, IndexKind, DetectorKind, usize, usize, u64);
    let key_of = |r: &RunReport| -> Key {
        let e = &r.config.enhance;
        (
            dataset_name(r),
            e.index,
            e.detector.algorithm,
            e.edges_per_iteration,
            e.max_iterations,
            e.early_stop_threshold.to_bits(),
        )
    };
    let mut groups: Vec<(Key, Vec<&RunReport>)> = Vec::new();
    for report in reports {
        let key = key_of(report);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(report),
            None => groups.push((key, vec![report])),
        }
    }

    groups
        .into_iter()
        .map(|((dataset, index, detector, l, n, delta), members)| {
            let s = |f: fn(&RunReport) -> Option<f64>| all(members.iter().map(|r| f(r)));
            let initial = s(|r| r.summary.initial_nmi);
            let finals = s(|r| r.summary.final_nmi);
            let best = s(|r| r.summary.best_nmi);
            let initial_median = initial.and_then(|mut v| median(&mut v));
            let final_median = finals.clone().and_then(|mut v| median(&mut v));
            let mut clusters: Vec<f64> = members.iter().map(|r| r.summary.final_clusters as f64).collect();
            AggregateRow {
                dataset,
                index,
                detector,
                l,
                n,
                delta: f64::from_bits(delta),
                runs: members.len(),
                initial_nmi_median: initial_median,
                final_nmi_min: finals.as_ref().and_then(|v| v.iter().copied().min_by(f64::total_cmp)),
                final_nmi_median: final_median,
                final_nmi_max: finals.as_ref().and_then(|v| v.iter().copied().max_by(f64::total_cmp)),
                best_nmi: best.and_then(|v| v.into_iter().max_by(f64::total_cmp)),
                delta_sign: initial_median.zip(final_median).map(|(a, b)| DeltaSign::of(a, b)),
                revising_fraction_mean: s(|r| r.summary.revising_fraction).and_then(|v| mean(&v)),
                reinforcing_fraction_mean: s(|r| r.summary.reinforcing_fraction).and_then(|v| mean(&v)),
                noise_fraction_mean: s(|r| r.summary.noise_fraction).and_then(|v| mean(&v)),
                final_clusters_median: median(&mut clusters).unwrap_or(0.0),
            }
        })
        .collect()
}

pub fn write_aggregate_csv(rows: &[AggregateRow], path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let io = |e: csv::Error| CliError::io(path, e.into());
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

fn run_job(job: &Job, dir: &Path) -> std::result::Result<PathBuf, Failure> {
    let fail = |e: CliError| Failure {
        run: job.stem(),
        exit_code: e.exit_code(),
        message: e.to_string(),
    };
    let dataset = Dataset::load(&job.edges, job.labels.as_deref()).map_err(fail)?;
    let (report, _) = execute(&dataset, &job.config).map_err(fail)?;
    let path = dir.join(format!("{}.json", job.stem()));
    fs::write(&path, report.to_json()).map_err(|e| fail(CliError::io(&path, e)))?;
    Ok(path)
}

/// Runs every job on `workers` threads, writing one report per job under
/// `out/runs`. Failed jobs are recorded and skipped. The aggregate is
/// computed from the reports as read back from disk.
pub fn run_bench(jobs: &[Job], out: &Path, workers: usize) -> Result<BenchOutcome> {
    let runs_dir = out.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| CliError::io(&runs_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<_> = pool.install(|| jobs.par_iter().map(|job| run_job(job, &runs_dir)).collect());

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(path) => {
                let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                reports.push(RunReport::from_json(&text).map_err(|e| CliError::parse(&path, e))?);
            }
            Err(failure) => failures.push(failure),
        }
    }
    let rows = aggregate(&reports);

    write_aggregate_csv(&rows, &out.join("aggregate.csv"))?;
    let json_path = out.join("aggregate.json");
    let text = serde_json::to_string_pretty(&rows).expect("rows serialize");
    fs::write(&json_path, text + "\n").map_err(|e| CliError::io(&json_path, e))?;
    let failures_path = out.join("failures.json");
    let text = serde_json::to_string_pretty(&failures).expect("failures serialize");
    fs::write(&failures_path, text + "\n").map_err(|e| CliError::io(&failures_path, e))?;

    Ok(BenchOutcome {
        reports,
        failures,
        aggregate: rows,
    })
}
