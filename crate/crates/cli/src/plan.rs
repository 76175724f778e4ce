//! Benchmark plans and the dataset manifest.
//!
//! A plan is TOML. Paths are resolved relative to the file that names them.
//!
//! ```toml
//! manifest = "../datasets/manifest.toml"
//! seeds = 10            # or an explicit list, e.g. [1, 5, 9]
//! n = 10
//! delta = [1.0, 0.95]   # one run per early-stop threshold; 1 disables
//!
//! [[run]]
//! dataset = "dolphins"  # looked up in the manifest, or give edges/labels
//! indices = ["ra", "hap"]
//! detectors = ["lpa", "louvain"]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use commenhance::{DetectorConfig, DetectorKind, EnhanceConfig, IndexKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::report::RunConfig;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct Expected {
    pub n: usize,
    pub m: usize,
    pub transitivity: f64,
    pub k: usize,
    pub intra: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub edges: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub l: usize,
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct Manifest {
    #[serde(rename = "dataset")]
    pub datasets: Vec<ManifestEntry>,
}

impl Manifest {
    /// Loads a manifest and makes its file paths absolute.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut manifest: Manifest = toml::from_str(&text).map_err(|e| CliError::parse(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for entry in &mut manifest.datasets {
            entry.edges = entry.edges.take().map(|p| base.join(p));
            entry.labels = entry.labels.take().map(|p| base.join(p));
        }
        Ok(manifest)
    }

    pub fn get(&self, name: &str) -> Option<&ManifestEntry> {
        self.datasets.iter().find(|d| d.name.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Seeds {
    Count(u64),
    List(Vec<u64>),
}

impl Seeds {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            Seeds::Count(n) => (0..*n).collect(),
            Seeds::List(list) => list.clone(),
        }
    }
}

impl std::str::FromStr for Seeds {
    type Err = String;

    /// `"10"` means seeds 0..10; `"1,5,9"` is an explicit list.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("invalid seed `{t}`"));
        if s.contains(',') {
            Ok(Seeds::List(
                s.split(',').map(parse).collect::<std::result::Result<_, _>>()?,
            ))
        } else {
            Ok(Seeds::Count(parse(s)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRun {
    pub dataset: Option<String>,
    pub edges: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub indices: Vec<IndexKind>,
    pub detectors: Vec<DetectorKind>,
    pub l: Option<usize>,
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub delta: Option<OneOrMany<f64>>,
    pub seeds: Option<Seeds>,
    pub external_cmd: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub manifest: Option<PathBuf>,
    pub seeds: Option<Seeds>,
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub delta: Option<OneOrMany<f64>>,
    #[serde(default, rename = "run")]
    pub runs: Vec<PlanRun>,
}

/// One fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub dataset: String,
    pub edges: PathBuf,
    pub labels: Option<PathBuf>,
    pub config: RunConfig,
}

impl Job {
    /// File stem for this job's report.
    pub fn stem(&self) -> String {
        let e = &self.config.enhance;
        format!(
            "{}_{}_{}_l{}_n{}_d{}_s{}",
            self.dataset,
            e.index,
            e.detector.algorithm,
            e.edges_per_iteration,
            e.max_iterations,
            e.early_stop_threshold,
            e.seed
        )
    }
}

pub const DEFAULT_SEEDS: u64 = 10;
pub const DEFAULT_DELTA: f64 = 1.0;

impl BenchPlan {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::parse(origin, e))
    }

    /// Reads a plan and resolves its paths against the plan's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut plan = Self::parse(&text, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        plan.manifest = plan.manifest.take().map(|p| base.join(p));
        for run in &mut plan.runs {
            run.edges = run.edges.take().map(|p| base.join(p));
            run.labels = run.labels.take().map(|p| base.join(p));
        }
        Ok(plan)
    }

    /// Expands the plan into one job per dataset, index, detector, threshold
    /// and seed. `seeds` overrides every seed list in the plan.
    pub fn jobs(&self, seeds: Option<&Seeds>) -> Result<Vec<Job>> {
        if self.runs.is_empty() {
            return Err(CliError::Usage("plan contains no [[run]] entries".into()));
        }
        let manifest = self.manifest.as_deref().map(Manifest::load).transpose()?;
        let mut jobs = Vec::new();
        for (i, run) in self.runs.iter().enumerate() {
            let label = run.dataset.clone().unwrap_or_else(|| format!("run{i}"));
            if run.indices.is_empty() || run.detectors.is_empty() {
                return Err(CliError::Usage(format!(
                    "{label}: needs at least one index and one detector"
                )));
            }
            let entry = match (&run.dataset, &manifest) {
                (Some(name), Some(m)) => m.get(name),
                _ => None,
            };
            let edges = run
                .edges
                .clone()
                .or_else(|| entry.and_then(|e| e.edges.clone()))
                .ok_or_else(|| CliError::Usage(format!("{label}: no edge file given or listed in the manifest")))?;
            let labels = run.labels.clone().or_else(|| entry.and_then(|e| e.labels.clone()));
            let l = run
                .l
                .or(entry.map(|e| e.l))
                .ok_or_else(|| CliError::Usage(format!("{label}: no `l` given or listed in the manifest")))?;
            let defaults = EnhanceConfig::default();
            let n = run.n.or(self.n).unwrap_or(defaults.max_iterations);
            let r = run.r.or(self.r).unwrap_or(defaults.early_stop_rounds);
            let deltas = run
                .delta
                .as_ref()
                .or(self.delta.as_ref())
                .map(|d| d.to_vec())
                .unwrap_or_else(|| vec![DEFAULT_DELTA]);
            let seed_list = seeds
                .or(run.seeds.as_ref())
                .or(self.seeds.as_ref())
                .map(|s| s.expand())
                .unwrap_or_else(|| (0..DEFAULT_SEEDS).collect());
            if seed_list.is_empty() || deltas.is_empty() {
                return Err(CliError::Usage(format!("{label}: empty seed or delta list")));
            }

            for &index in &run.indices {
                for &detector in &run.detectors {
                    if detector == DetectorKind::External && run.external_cmd.is_none() {
                        return Err(CliError::Usage(format!(
                            "{label}: external detector needs external_cmd"
                        )));
                    }
                    for &delta in &deltas {
                        for &seed in &seed_list {
                            let enhance = EnhanceConfig {
                                index,
                                detector: DetectorConfig {
                                    algorithm: detector,
                                    ..DetectorConfig::default()
                                },
                                edges_per_iteration: l,
                                max_iterations: n,
                                early_stop_rounds: r,
                                early_stop_threshold: delta,
                                seed,
                            };
                            enhance
                                .validate()
                                .map_err(|e| CliError::Usage(format!("{label}: {e}")))?;
                            jobs.push(Job {
                                dataset: label.clone(),
                                edges: edges.clone(),
                                labels: labels.clone(),
                                config: RunConfig {
                                    enhance,
                                    external_cmd: run.external_cmd.clone(),
                                },
                            });
                        }
                    }
                }
            }
        }
        Ok(jobs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(text: &str) -> BenchPlan {
        BenchPlan::parse(text, Path::new("plan.toml")).unwrap()
    }

    #[test]
    fn expands_the_cross_product() {
        let p = plan(
            r#"
            seeds = 3
            [[run]]
            edges = "a.edges"
            dataset = "a"
            l = 2
            indices = ["ra", "hap"]
            detectors = ["lpa", "louvain"]
            delta = [1.0, 0.9]
            "#,
        );
        let jobs = p.jobs(None).unwrap();
        assert_eq!(jobs.len(), 2 * 2 * 2 * 3);
        assert_eq!(jobs[0].config.enhance.edges_per_iteration, 2);
        let override_seeds = Seeds::List(vec![7]);
        assert_eq!(p.jobs(Some(&override_seeds)).unwrap().len(), 8);
    }

    #[test]
    fn empty_plan_is_rejected() {
        let err = plan("seeds = 2").jobs(None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_index_is_a_parse_error() {
        let err = BenchPlan::parse("[[run]]\nindices = [\"xx\"]\ndetectors = []", Path::new("p")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn l_comes_from_the_manifest() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("m.toml"),
            "[[dataset]]\nname = \"g\"\nedges = \"g.edges\"\nl = 42\n",
        )
        .unwrap();
        let plan_path = dir.path().join("plan.toml");
        fs::write(
            &plan_path,
            "manifest = \"m.toml\"\nseeds = [4]\n[[run]]\ndataset = \"g\"\nindices = [\"cn\"]\ndetectors = [\"lpa\"]\n",
        )
        .unwrap();
        let jobs = BenchPlan::load(&plan_path).unwrap().jobs(None).unwrap();
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].config.enhance.edges_per_iteration, 42);
        assert_eq!(jobs[0].edges, dir.path().join("g.edges"));
        assert_eq!(jobs[0].config.enhance.seed, 4);
    }

    #[test]
    fn seeds_parse_from_flags() {
        assert_eq!("3".parse::<Seeds>().unwrap().expand(), [0, 1, 2]);
        assert_eq!("4, 9".parse::<Seeds>().unwrap().expand(), [4, 9]);
        assert!("x".parse::<Seeds>().is_err());
    }
}
