use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn csd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csd"))
        .args(args)
        .env("CSD_LOG", "error")
        .output()
        .expect("run csd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn f1() -> (String, String) {
    (
        fixture("f1.jsonl").to_string_lossy().into_owned(),
        fixture("f1-vecs.jsonl").to_string_lossy().into_owned(),
    )
}

/// 120 papers over 1990..2009; each cites a few earlier ones.
fn synthetic_corpus(dir: &Path) -> PathBuf {
    let mut lines = String::new();
    for i in 0..120u32 {
        let year = 1990 + i / 6;
        let refs: Vec<String> = (1..=(i % 7))
            .filter_map(|k| i.checked_sub(6 * k + (i % 3)))
            .map(|r| format!("\"p{r:03}\""))
            .collect();
        lines.push_str(&format!(
            "{{\"id\":\"p{i:03}\",\"title\":\"t\",\"year\":{year},\"references\":[{}]}}\n",
            refs.join(",")
        ));
    }
    let path = dir.join("synthetic.jsonl");
    fs::write(&path, lines).unwrap();
    path
}

#[test]
fn sd_reproduces_the_worked_example() {
    let (c, e) = f1();
    let o = csd(&["sd", "--corpus", &c, "--embeddings", &e, "--theta1", "0.85", "--theta2", "0.7", "--targets", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "target_id,n_refs,sd_r,sd_c,sd_ss,sd_cs,sd_scs,sd_css,theta1,theta2\n1,5,4,2,3,3,2,1,0.85,0.7\n"
    );
}

#[test]
fn correlate_on_one_group_is_a_data_error() {
    let (c, _) = f1();
    let o = csd(&["correlate", "--corpus", &c, "--targets", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fewer than 2 diversity groups"));
}

#[test]
fn help_exits_zero_and_lists_flags() {
    let flags: &[(&str, &[&str])] = &[
        ("ingest", &["--corpus", "--format", "--out", "--threads", "--config"]),
        ("component", &["--corpus", "--edge-list"]),
        ("sd", &["--embeddings", "--theta1", "--theta2", "--theta-policy", "--variant", "--targets"]),
        ("correlate", &["--stat", "--diversity"]),
        ("trends", &["--variant"]),
        ("predict", &["--horizon", "--seed"]),
        ("report", &["--stat", "--horizon", "--seed", "--embeddings"]),
    ];
    let o = csd(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for (cmd, expected) in flags {
        let o = csd(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let text = stdout(&o);
        for f in *expected {
            assert!(text.contains(f), "{cmd} --help lacks {f}");
        }
    }
}

#[test]
fn usage_errors_exit_one() {
    let (c, _) = f1();
    assert_eq!(csd(&["sd", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(csd(&["sd"]).status.code(), Some(1));
    assert_eq!(csd(&["frobnicate"]).status.code(), Some(1));
    let o = csd(&["sd", "--corpus", &c, "--variant", "semantic_enhanced"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--embeddings"));
    assert_eq!(csd(&["sd", "--corpus", &c, "--format", "xml"]).status.code(), Some(1));
    assert_eq!(csd(&["predict", "--corpus", &c, "--horizon", "3", "--seed", "1"]).status.code(), Some(1));
}

#[test]
fn missing_input_is_a_data_error() {
    let o = csd(&["sd", "--corpus", "/nonexistent/corpus.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/corpus.jsonl"));
    let (c, _) = f1();
    let o = csd(&["sd", "--corpus", &c, "--targets", "42"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"42\""));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"corpus": "{}", "embeddings": "{}", "theta1": 0.1, "theta2": 0.7, "targets": ["1"]}}"#,
            fixture("f1.jsonl").display(),
            fixture("f1-vecs.jsonl").display()
        ),
    )
    .unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let o = csd(&["sd", "--config", &cfg, "--theta1", "0.85"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("\n1,5,4,2,3,3,2,1,0.85,0.7\n"));
    let o = csd(&["sd", "--config", &cfg]);
    assert!(stdout(&o).ends_with(",0.1,0.7\n"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"corpse": "x"}"#).unwrap();
    assert_eq!(csd(&["sd", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn ingest_and_component_write_files() {
    let (c, _) = f1();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = csd(&["ingest", "--corpus", &c, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let canon = fs::read_to_string(out.join("corpus.jsonl")).unwrap();
    assert_eq!(canon.lines().count(), 8);
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("ingest_report.json")).unwrap()).unwrap();
    assert_eq!(report["records"], 8);

    let o = csd(&["component", "--corpus", out.join("corpus.jsonl").to_str().unwrap(), "--out", out.to_str().unwrap(), "--edge-list"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join("component.jsonl")).unwrap(), canon);
    let edges = fs::read_to_string(out.join("edges.tsv")).unwrap();
    assert_eq!(edges.lines().count(), 10);
    assert!(edges.starts_with("1\t2\n"));
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["component.jsonl", "corpus.jsonl", "edges.tsv", "ingest_report.json"]);
}

#[test]
fn cleaning_flags_reach_the_corpus() {
    let (c, _) = f1();
    let o = csd(&["ingest", "--corpus", &c, "--min-references", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ids: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["1", "2", "4", "6", "7"]);
}

#[test]
fn trends_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(dir.path());
    let o = csd(&["trends", "--corpus", corpus.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bin,year_offset,mean_normalized,n_papers"));
    assert_eq!(lines.clone().count() % 10, 0);
    assert!(text.contains("\nlow,0,"));
    assert_eq!(
        csd(&["trends", "--corpus", corpus.to_str().unwrap(), "--variant", "plain,combined"]).status.code(),
        Some(1)
    );
}

#[test]
fn precomputed_diversity_matches_on_the_fly() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(dir.path());
    let c = corpus.to_str().unwrap();
    let sd = csd(&["sd", "--corpus", c]);
    assert!(sd.status.success());
    let table = dir.path().join("diversity.csv");
    fs::write(&table, &sd.stdout).unwrap();
    let live = csd(&["correlate", "--corpus", c]);
    let cached = csd(&["correlate", "--corpus", c, "--diversity", table.to_str().unwrap()]);
    assert!(live.status.success(), "{}", stderr(&live));
    assert_eq!(live.stdout, cached.stdout);
    let summaries: serde_json::Value = serde_json::from_slice(&live.stdout).unwrap();
    assert_eq!(summaries.as_array().unwrap().len(), 2 * 2 * 2);
}

#[test]
fn predict_writes_metrics_and_features() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(dir.path());
    let out = dir.path().join("pred");
    let o = csd(&["predict", "--corpus", corpus.to_str().unwrap(), "--seed", "11", "--horizon", "5", "--variant", "plain", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let metrics: serde_json::Value = serde_json::from_slice(&fs::read(out.join("metrics.json")).unwrap()).unwrap();
    let rows = metrics.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for m in rows {
        assert_eq!(m["seed"], 11);
        assert_eq!(m["horizon"], 5);
        assert_eq!(m["n_train"].as_u64().unwrap() + m["n_test"].as_u64().unwrap(), 120);
    }
    let base = fs::read_to_string(out.join("features_baseline_h5.csv")).unwrap();
    let plain = fs::read_to_string(out.join("features_plain_h5.csv")).unwrap();
    assert!(base.starts_with("id,n_references,citations_3yr,target_h5\n"));
    assert!(plain.starts_with("id,n_references,citations_3yr,sd_value,target_h5\n"));
    assert_eq!(base.lines().count(), 121);
    assert_eq!(csd(&["predict", "--corpus", corpus.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(dir.path());
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = csd(&["report", "--corpus", corpus.to_str().unwrap(), "--seed", "5", "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out.join("report.json")).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "4");
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["seed"], 5);
    assert!(doc["predictions"].as_array().unwrap().len() >= 6);
}
