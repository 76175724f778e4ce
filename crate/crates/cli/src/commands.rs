use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use commenhance::detect::modularity;
use commenhance::graph::{structural_stats, write_edge_list};
use commenhance::metrics::nmi;
use commenhance::{DetectorConfig, DetectorKind, EnhanceConfig, IndexKind};

use crate::bench::run_bench;
use crate::dataset::Dataset;
use crate::error::{CliError, Result};
use crate::plan::{BenchPlan, Seeds};
use crate::report::{detector_for, execute, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "commenhance",
    version,
    about = "Enhance community structure by adding predicted links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print node, edge, transitivity and community statistics.
    Stats {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Run one community detection.
    Detect {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        detector: DetectorArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write `node community` lines here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the enhancement loop and write a report.
    Enhance {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        detector: DetectorArgs,
        #[arg(long, default_value = "hap")]
        index: IndexKind,
        /// Edges added per iteration.
        #[arg(long, default_value_t = 10)]
        l: usize,
        /// Maximum iterations.
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Previous detections compared for early stopping.
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Early-stop NMI threshold; 1 disables early stopping.
        #[arg(long, default_value_t = 0.95)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Several runs: a count (`10` = seeds 0..10) or a list (`1,4,7`).
        #[arg(long, conflicts_with = "seed")]
        seeds: Option<Seeds>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Also write the final augmented edge list.
        #[arg(long)]
        write_graph: bool,
    },
    /// Run every combination of a plan file.
    Bench {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Parallel worker slots.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Override the seeds of every plan entry.
        #[arg(long)]
        seeds: Option<Seeds>,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    #[arg(long)]
    pub edges: PathBuf,
    /// Ground-truth communities.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectorArgs {
    #[arg(long, default_value = "louvain")]
    pub detector: DetectorKind,
    /// Command for `--detector external`; must contain {input} and {output}.
    #[arg(long)]
    pub external_cmd: Option<String>,
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.5}")).unwrap_or_else(|| "-".into())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let stdout = |e: std::io::Error| CliError::io("<stdout>", e);
    match cli.command {
        Command::Stats { edges, labels } => {
            let dataset = Dataset::load(&edges, labels.as_deref())?;
            let stats = structural_stats(&dataset.graph, dataset.truth.as_ref());
            writeln!(out, "nodes          {}", stats.nodes).map_err(stdout)?;
            writeln!(out, "edges          {}", stats.edges).map_err(stdout)?;
            writeln!(out, "transitivity   {:.5}", stats.transitivity).map_err(stdout)?;
            if let (Some(k), Some(intra)) = (stats.communities, stats.intra_fraction) {
                writeln!(out, "communities    {k}").map_err(stdout)?;
                writeln!(out, "intra fraction {intra:.5}").map_err(stdout)?;
            }
            if dataset.info.dropped_records > 0 {
                writeln!(out, "dropped        {}", dataset.info.dropped_records).map_err(stdout)?;
            }
            writeln!(out, "{}", serde_json::to_string(&stats).expect("stats serialize")).map_err(stdout)?;
        }

        Command::Detect {
            input,
            detector,
            seed,
            out: path,
        } => {
            let dataset = Dataset::load(&input.edges, input.labels.as_deref())?;
            let config = run_config(&detector, EnhanceConfig::default().index, 1, 1, 1, 1.0, seed);
            let partition = detector_for(&config)?.detect(&dataset.graph, seed)?;
            writeln!(out, "communities {}", partition.community_count()).map_err(stdout)?;
            if dataset.graph.edge_count() > 0 {
                writeln!(out, "modularity  {:.5}", modularity(&dataset.graph, &partition)?).map_err(stdout)?;
            }
            if let Some(truth) = &dataset.truth {
                writeln!(out, "nmi         {:.5}", nmi(&partition, truth)?).map_err(stdout)?;
            }
            if let Some(path) = path {
                let mut text = String::new();
                for (node, label) in partition.labels().iter().enumerate() {
                    text.push_str(&format!("{} {}\n", dataset.graph.node_name(node), label));
                }
                fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            }
        }

        Command::Enhance {
            input,
            detector,
            index,
            l,
            n,
            r,
            delta,
            seed,
            seeds,
            out: dir,
            write_graph,
        } => {
            let dataset = Dataset::load(&input.edges, input.labels.as_deref())?;
            fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            let (seed_list, suffixed) = match &seeds {
                Some(s) => (s.expand(), true),
                None => (vec![seed], false),
            };
            writeln!(
                out,
                "seed  iters  added  clusters  initial_nmi  final_nmi  best_nmi  revising"
            )
            .map_err(stdout)?;
            for seed in seed_list {
                let config = run_config(&detector, index, l, n, r, delta, seed);
                config.enhance.validate().map_err(|e| CliError::Usage(e.to_string()))?;
                let (report, outcome) = execute(&dataset, &config)?;
                let suffix = if suffixed { format!("_s{seed}") } else { String::new() };
                write_file(&dir.join(format!("report{suffix}.json")), report.to_json().as_bytes())?;
                let mut table = Vec::new();
                report
                    .write_table(&mut table)
                    .map_err(|e| CliError::io(&dir, e.into()))?;
                write_file(&dir.join(format!("trace{suffix}.csv")), &table)?;
                if write_graph {
                    let mut edges = Vec::new();
                    write_edge_list(&outcome.graph, &mut edges).map_err(|e| CliError::io(&dir, e))?;
                    write_file(&dir.join(format!("enhanced{suffix}.edges")), &edges)?;
                }
                let s = &report.summary;
                writeln!(
                    out,
                    "{seed:<5} {:<6} {:<6} {:>3}->{:<4} {:<12} {:<10} {:<9} {}",
                    s.iterations,
                    s.added_edges,
                    s.initial_clusters,
                    s.final_clusters,
                    fmt_opt(s.initial_nmi),
                    fmt_opt(s.final_nmi),
                    fmt_opt(s.best_nmi),
                    fmt_opt(s.revising_fraction),
                )
                .map_err(stdout)?;
            }
        }

        Command::Bench {
            plan,
            out: dir,
            jobs,
            seeds,
        } => {
            let plan = BenchPlan::load(&plan)?;
            let job_list = plan.jobs(seeds.as_ref())?;
            let outcome = run_bench(&job_list, &dir, jobs)?;
            writeln!(
                out,
                "{:<12} {:<5} {:<8} {:>5} {:>5} {:>6} {:>9} {:>9} {:>9} {:>4} {:>8}",
                "dataset", "index", "detector", "delta", "runs", "final", "min", "max", "best", "sign", "revising"
            )
            .map_err(stdout)?;
            for row in &outcome.aggregate {
                writeln!(
                    out,
                    "{:<12} {:<5} {:<8} {:>5} {:>5} {:>6} {:>9} {:>9} {:>9} {:>4} {:>8}",
                    row.dataset,
                    row.index.to_string(),
                    row.detector.to_string(),
                    row.delta,
                    row.runs,
                    fmt_opt(row.final_nmi_median),
                    fmt_opt(row.final_nmi_min),
                    fmt_opt(row.final_nmi_max),
                    fmt_opt(row.best_nmi),
                    row.delta_sign.map(|s| s.symbol()).unwrap_or("-"),
                    fmt_opt(row.revising_fraction_mean),
                )
                .map_err(stdout)?;
            }
            for failure in &outcome.failures {
                eprintln!("failed {}: {}", failure.run, failure.message);
            }
            if outcome.reports.is_empty() {
                if let Some(first) = outcome.failures.first() {
                    return Err(CliError::Usage(format!("every run failed; first: {}", first.message)));
                }
            }
        }
    }
    Ok(())
}

fn run_config(
    detector: &DetectorArgs,
    index: IndexKind,
    l: usize,
    n: usize,
    r: usize,
    delta: f64,
    seed: u64,
) -> RunConfig {
    RunConfig {
        enhance: EnhanceConfig {
            index,
            detector: DetectorConfig {
                algorithm: detector.detector,
                seed,
                ..DetectorConfig::default()
            },
            edges_per_iteration: l,
            max_iterations: n,
            early_stop_rounds: r,
            early_stop_threshold: delta,
            seed,
        },
        external_cmd: detector.external_cmd.clone(),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
