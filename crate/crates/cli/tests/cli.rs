use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Parser;
use commenhance_cli::bench::aggregate;
use commenhance_cli::report::{reproduce, RunReport};
use commenhance_cli::{run, Cli};
use commenhance_testkit::fixtures::datasets_dir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_commenhance"))
}

fn invoke(args: &[&str]) -> Result<String, commenhance_cli::CliError> {
    let cli = Cli::try_parse_from(std::iter::once("commenhance").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    run(cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn data(name: &str) -> String {
    datasets_dir().join(name).to_string_lossy().into_owned()
}

fn last_json(out: &str) -> serde_json::Value {
    serde_json::from_str(out.lines().last().unwrap()).unwrap()
}

#[test]
fn stats_with_and_without_labels() {
    let out = invoke(&[
        "stats",
        "--edges",
        &data("karate.edges"),
        "--labels",
        &data("karate.labels"),
    ])
    .unwrap();
    let v = last_json(&out);
    assert_eq!(v["nodes"], 34);
    assert_eq!(v["edges"], 78);
    assert!((v["transitivity"].as_f64().unwrap() - 0.25568).abs() < 1e-4);
    assert_eq!(v["communities"], 2);
    assert!((v["intra_fraction"].as_f64().unwrap() - 0.87179).abs() < 1e-4);

    let out = invoke(&["stats", "--edges", &data("dolphins.edges")]).unwrap();
    let v = last_json(&out);
    assert_eq!((v["nodes"].as_u64(), v["edges"].as_u64()), (Some(62), Some(159)));
    assert!(v["communities"].is_null() && v["intra_fraction"].is_null());
    assert!(!out.lines().any(|l| l.starts_with("communities")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "1 2\n3\n").unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["stats", "--edges", &data("karate.edges")]), 0);
    assert_eq!(code(&["stats", "--edges", "/nonexistent/file"]), 5);
    assert_eq!(code(&["stats", "--edges", bad.to_str().unwrap()]), 3);
    assert_eq!(code(&["stats"]), 2);
    let out = bin()
        .args([
            "enhance",
            "--edges",
            &data("karate.edges"),
            "--detector",
            "infomap",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lpa, louvain, external"));
    let out = bin()
        .args([
            "detect",
            "--edges",
            &data("karate.edges"),
            "--detector",
            "external",
            "--external-cmd",
        ])
        .arg("echo nope >&2; exit 1 # {input} {output}")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

fn enhance_into(dir: &Path, extra: &[&str]) -> RunReport {
    let mut args = vec!["enhance", "--edges", extra[0], "--out", dir.to_str().unwrap()];
    args.extend_from_slice(&extra[1..]);
    invoke(&args).unwrap();
    RunReport::from_json(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn complete_graph_adds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let k6 = dir.path().join("k6.edges");
    let mut text = String::new();
    for i in 0..6 {
        for j in i + 1..6 {
            text.push_str(&format!("{i} {j}\n"));
        }
    }
    fs::write(&k6, text).unwrap();
    for index in ["ja", "pa", "cn", "cn1", "ra", "ra1", "hap"] {
        let out = dir.path().join(index);
        let report = enhance_into(&out, &[k6.to_str().unwrap(), "--index", index]);
        assert_eq!(report.summary.added_edges, 0);
        assert_eq!(report.trace.len(), 1);
        assert!(report.trace[0].candidates_exhausted);
    }
}

fn strip_timing(text: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn reports_are_deterministic_and_reproducible() {
    let root = tempfile::tempdir().unwrap();
    let edges = data("dolphins.edges");
    let labels = data("dolphins.labels");
    let args = [
        edges.as_str(),
        "--labels",
        labels.as_str(),
        "--index",
        "hap",
        "--detector",
        "louvain",
        "--seed",
        "1",
        "--l",
        "10",
        "--n",
        "10",
    ];
    let a = enhance_into(&root.path().join("a"), &args);
    let b = enhance_into(&root.path().join("b"), &args);
    let text_a = fs::read_to_string(root.path().join("a/report.json")).unwrap();
    let text_b = fs::read_to_string(root.path().join("b/report.json")).unwrap();
    assert_eq!(strip_timing(&text_a), strip_timing(&text_b));
    assert_eq!(
        fs::read(root.path().join("a/trace.csv")).unwrap(),
        fs::read(root.path().join("b/trace.csv")).unwrap()
    );
    let differing: Vec<_> = text_a.lines().zip(text_b.lines()).filter(|(x, y)| x != y).collect();
    assert!(differing
        .iter()
        .all(|(x, _)| x.contains("generated_at") || x.contains("wall_seconds")));

    assert_eq!(RunReport::from_json(&a.to_json()).unwrap(), a);
    assert_eq!(reproduce(&a).unwrap().trace, b.trace);

    assert!(a.trace[0].clusters > 2);
    let first = &a.trace[1];
    assert!(first.revising.unwrap() > first.reinforcing.unwrap());

    let table = fs::read_to_string(root.path().join("a/trace.csv")).unwrap();
    let lines: Vec<_> = table.lines().collect();
    assert_eq!(
        lines[0],
        "iteration,nmi,clusters,added,revising,reinforcing,noise,nmi_vs_previous"
    );
    assert_eq!(lines.len(), a.trace.len() + 1);
}

#[test]
fn inputs_are_left_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.edges");
    let labels = dir.path().join("g.labels");
    fs::copy(data("karate.edges"), &edges).unwrap();
    fs::copy(data("karate.labels"), &labels).unwrap();
    let before = (fs::read(&edges).unwrap(), fs::read(&labels).unwrap());
    enhance_into(
        &dir.path().join("out"),
        &[
            edges.to_str().unwrap(),
            "--labels",
            labels.to_str().unwrap(),
            "--write-graph",
        ],
    );
    assert_eq!(before, (fs::read(&edges).unwrap(), fs::read(&labels).unwrap()));
    let enhanced = fs::read_to_string(dir.path().join("out/enhanced.edges")).unwrap();
    assert!(enhanced.lines().count() > 78);
}

#[test]
fn multiple_seeds_write_suffixed_files() {
    let dir = tempfile::tempdir().unwrap();
    invoke(&[
        "enhance",
        "--edges",
        &data("karate.edges"),
        "--seeds",
        "0,3",
        "--out",
        dir.path().to_str().unwrap(),
    ])
    .unwrap();
    assert!(dir.path().join("report_s0.json").exists());
    assert!(dir.path().join("trace_s3.csv").exists());
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn external_detector_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let script = format!("cp {} {{output}} # {{input}}", data("karate.labels"));
    let out = invoke(&[
        "detect",
        "--edges",
        &data("karate.edges"),
        "--labels",
        &data("karate.labels"),
        "--detector",
        "external",
        "--external-cmd",
        &script,
    ])
    .unwrap();
    assert!(out.contains("nmi         1.00000"));

    let partial = dir.path().join("partial.labels");
    let text = fs::read_to_string(data("karate.labels")).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("33 ")).collect();
    fs::write(&partial, kept.join("\n")).unwrap();
    let script = format!("cp {} {{output}} # {{input}}", partial.display());
    let err = invoke(&[
        "detect",
        "--edges",
        &data("karate.edges"),
        "--detector",
        "external",
        "--external-cmd",
        &script,
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 4);
    assert!(err.to_string().contains("33"));
}

fn write_plan(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("plan.toml");
    let manifest = datasets_dir().join("manifest.toml");
    fs::write(&path, format!("manifest = {:?}\n{body}", manifest.to_string_lossy())).unwrap();
    path
}

#[test]
fn bench_counts_rows_and_aggregates_from_reports() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_plan(
        dir.path(),
        r#"
seeds = 10
[[run]]
dataset = "karate"
indices = ["ra", "hap"]
detectors = ["lpa", "louvain"]
[[run]]
dataset = "dolphins"
indices = ["ra", "hap"]
detectors = ["lpa", "louvain"]
"#,
    );
    let out = dir.path().join("out");
    invoke(&[
        "bench",
        "--plan",
        plan.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        "4",
        "--seeds",
        "3",
    ])
    .unwrap();
    let rows: Vec<commenhance_cli::bench::AggregateRow> =
        serde_json::from_str(&fs::read_to_string(out.join("aggregate.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.runs == 3));

    let mut paths: Vec<_> = fs::read_dir(out.join("runs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert_eq!(paths.len(), 24);
    let mut reports: Vec<RunReport> = paths
        .iter()
        .map(|p| RunReport::from_json(&fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    let key = |r: &RunReport| {
        (
            r.dataset.edges.path.clone(),
            r.config.enhance.index,
            r.config.enhance.detector.algorithm as u8,
        )
    };
    reports.sort_by_key(key);
    let mut posthoc = aggregate(&reports);
    let mut sorted_rows = rows.clone();
    let row_key = |r: &commenhance_cli::bench::AggregateRow| (r.dataset.clone(), r.index, r.detector as u8);
    posthoc.sort_by_key(row_key);
    sorted_rows.sort_by_key(row_key);
    assert_eq!(posthoc, sorted_rows);

    let csv = fs::read_to_string(out.join("aggregate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
}

#[test]
fn bench_records_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_plan(
        dir.path(),
        r#"
seeds = 1
[[run]]
dataset = "karate"
indices = ["cn"]
detectors = ["lpa"]
[[run]]
dataset = "missing"
edges = "does-not-exist.edges"
l = 5
indices = ["cn"]
detectors = ["lpa"]
"#,
    );
    let out = dir.path().join("out");
    invoke(&[
        "bench",
        "--plan",
        plan.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    let failures: Vec<commenhance_cli::bench::Failure> =
        serde_json::from_str(&fs::read_to_string(out.join("failures.json")).unwrap()).unwrap();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].exit_code, 5);
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(out.join("aggregate.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
}

#[test]
fn empty_plan_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_plan(dir.path(), "seeds = 3\n");
    let err = invoke(&[
        "bench",
        "--plan",
        plan.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
