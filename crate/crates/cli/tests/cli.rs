//! Behavioral tests of the `lbl2vec` binary: exit codes, file contracts,
//! and equivalence with the library it wraps.

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use common::{assert_exit, run, write_corpus, write_keywords, TOPIC_NAMES};
use lbl2vec::evaluation::EvaluationSummary;
use lbl2vec::MicroPrf;

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Workspace {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Workspace { _dir: dir, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

/// Trains a small model on a fresh fixture, returning the workspace with
/// corpus.jsonl, keywords.json, and model.bin in place.
fn trained_workspace() -> Workspace {
    let ws = Workspace::new();
    write_corpus(&ws.path("corpus.jsonl"), 7, 80, 30);
    write_keywords(&ws.path("keywords.json"));
    let output = run(&[
        "train",
        "--corpus",
        &ws.arg("corpus.jsonl"),
        "--out",
        &ws.arg("model.bin"),
        "--dim",
        "40",
        "--epochs",
        "12",
        "--min-count",
        "2",
        "--seed",
        "42",
    ]);
    assert_exit(&output, 0);
    ws
}

fn make_labels(ws: &Workspace) {
    let output = run(&[
        "labels",
        "--model",
        &ws.arg("model.bin"),
        "--keywords",
        &ws.arg("keywords.json"),
        "--out",
        &ws.arg("labels.json"),
        "--s",
        "0.43",
        "--dmin",
        "20",
    ]);
    assert_exit(&output, 0);
}

#[test]
fn train_reports_counts_and_writes_model() {
    let ws = trained_workspace();
    assert!(ws.path("model.bin").exists());
    // Stated counters appear on stdout.
    let output = run(&[
        "train",
        "--corpus",
        &ws.arg("corpus.jsonl"),
        "--out",
        &ws.arg("model_again.bin"),
        "--dim",
        "40",
        "--epochs",
        "2",
        "--min-count",
        "2",
        "--seed",
        "1",
    ]);
    assert_exit(&output, 0);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("documents: 240"));
    assert!(stdout.contains("vocabulary size:"));
    assert!(stdout.contains("final loss:"));
}

#[test]
fn missing_corpus_exits_2_with_file_not_found() {
    let ws = Workspace::new();
    let output = run(&[
        "train",
        "--corpus",
        &ws.arg("absent.jsonl"),
        "--out",
        &ws.arg("model.bin"),
    ]);
    assert_exit(&output, 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("file not found"));
}

#[test]
fn out_of_range_s_exits_2() {
    let ws = trained_workspace();
    let output = run(&[
        "labels",
        "--model",
        &ws.arg("model.bin"),
        "--keywords",
        &ws.arg("keywords.json"),
        "--out",
        &ws.arg("labels.json"),
        "--s",
        "1.5",
    ]);
    assert_exit(&output, 2);
}

#[test]
fn labels_writes_one_embedding_per_topic() {
    let ws = trained_workspace();
    make_labels(&ws);
    let labels = lbl2vec::labeling::load_labels(ws.path("labels.json")).unwrap();
    assert_eq!(labels.len(), 3);
    for (label, name) in labels.iter().zip(TOPIC_NAMES) {
        assert_eq!(label.topic, name);
        assert!(label.kept_count >= 1);
        assert!(label.kept_count <= label.candidate_count);
    }
}

#[test]
fn all_oov_topic_exits_3_naming_it() {
    let ws = trained_workspace();
    std::fs::write(
        ws.path("bad_keywords.json"),
        r#"[{"topic":"ghost","keywords":["never-seen-anywhere","nor-this"]}]"#,
    )
    .unwrap();
    let output = run(&[
        "labels",
        "--model",
        &ws.arg("model.bin"),
        "--keywords",
        &ws.arg("bad_keywords.json"),
        "--out",
        &ws.arg("labels.json"),
        "--dmin",
        "5",
    ]);
    assert_exit(&output, 3);
    assert!(String::from_utf8_lossy(&output.stderr).contains("ghost"));
}

#[test]
fn retrieve_with_alpha_one_writes_empty_file() {
    let ws = trained_workspace();
    make_labels(&ws);
    let output = run(&[
        "retrieve",
        "--model",
        &ws.arg("model.bin"),
        "--labels",
        &ws.arg("labels.json"),
        "--topic",
        "alpha",
        "--alpha",
        "1.0",
        "--out",
        &ws.arg("hits.jsonl"),
    ]);
    assert_exit(&output, 0);
    assert_eq!(std::fs::metadata(ws.path("hits.jsonl")).unwrap().len(), 0);
}

#[test]
fn retrieve_unknown_topic_exits_3() {
    let ws = trained_workspace();
    make_labels(&ws);
    let output = run(&[
        "retrieve",
        "--model",
        &ws.arg("model.bin"),
        "--labels",
        &ws.arg("labels.json"),
        "--topic",
        "nonexistent",
        "--out",
        &ws.arg("hits.jsonl"),
    ]);
    assert_exit(&output, 3);
}

fn classify_and_evaluate(ws: &Workspace) -> EvaluationSummary {
    let output = run(&[
        "classify",
        "--model",
        &ws.arg("model.bin"),
        "--labels",
        &ws.arg("labels.json"),
        "--out",
        &ws.arg("preds.jsonl"),
    ]);
    assert_exit(&output, 0);
    let output = run(&[
        "evaluate",
        "--corpus",
        &ws.arg("corpus.jsonl"),
        "--predictions",
        &ws.arg("preds.jsonl"),
        "--roc-csv",
        &ws.arg("roc.csv"),
        "--summary",
        &ws.arg("summary.json"),
    ]);
    assert_exit(&output, 0);
    serde_json::from_str(&std::fs::read_to_string(ws.path("summary.json")).unwrap()).unwrap()
}

#[test]
fn evaluate_on_separable_fixture_reports_high_scores() {
    let ws = trained_workspace();
    make_labels(&ws);
    let summary = classify_and_evaluate(&ws);
    assert!(summary.micro.f1 >= 0.9, "micro F1 {}", summary.micro.f1);
    assert_eq!(summary.per_topic_auc.len(), 3);
    assert!(summary.micro_average_auc >= 0.9);

    let csv = std::fs::read_to_string(ws.path("roc.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("topic,threshold,fpr,tpr"));
    assert!(csv.lines().any(|l| l.starts_with("micro-average,")));
}

#[test]
fn evaluate_matches_library_micro_prf() {
    let ws = trained_workspace();
    make_labels(&ws);
    let summary = classify_and_evaluate(&ws);

    let corpus = lbl2vec::ingest_jsonl(ws.path("corpus.jsonl")).unwrap();
    let records = lbl2vec::retrieval::load_predictions(ws.path("preds.jsonl")).unwrap();
    let gold = corpus.gold_labels();
    let expected: MicroPrf = lbl2vec::micro_prf(&records, &gold).unwrap();
    assert_eq!(summary.micro.f1.to_bits(), expected.f1.to_bits());
}

#[test]
fn perfect_predictions_evaluate_to_f1_one() {
    // Hand-written predictions equal to gold for a 4-doc corpus.
    let ws = Workspace::new();
    std::fs::write(
        ws.path("corpus.jsonl"),
        concat!(
            "{\"text\":\"a\",\"label\":\"x\"}\n",
            "{\"text\":\"b\",\"label\":\"x\"}\n",
            "{\"text\":\"c\",\"label\":\"y\"}\n",
            "{\"text\":\"d\",\"label\":\"y\"}\n",
        ),
    )
    .unwrap();
    let mut preds = String::new();
    let rows: [(&str, f64, f64); 4] = [
        ("x", 0.9, 0.1),
        ("x", 0.8, 0.2),
        ("y", 0.1, 0.9),
        ("y", 0.2, 0.8),
    ];
    for (doc_id, (topic, sx, sy)) in rows
    .into_iter()
    .enumerate()
    {
        preds.push_str(&format!(
            "{}\n",
            serde_json::json!({
                "doc_id": doc_id,
                "topic": topic,
                "similarity": sx.max(sy),
                "accepted": true,
                "scores": {"x": sx, "y": sy},
            })
        ));
    }
    std::fs::write(ws.path("preds.jsonl"), preds).unwrap();
    let output = run(&[
        "evaluate",
        "--corpus",
        &ws.arg("corpus.jsonl"),
        "--predictions",
        &ws.arg("preds.jsonl"),
    ]);
    assert_exit(&output, 0);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("micro f1:        1.0000"), "stdout: {stdout}");
}

#[test]
fn analyze_keywords_matches_direct_library_call() {
    let ws = trained_workspace();
    // Varied keyword counts and AUC values so every correlation is defined.
    std::fs::write(
        ws.path("keywords.json"),
        serde_json::to_string(&serde_json::json!([
            {"topic": "alpha", "keywords": ["alpha0", "alpha1", "alpha2"]},
            {"topic": "beta", "keywords": ["beta0", "beta1", "beta2", "beta3"]},
            {"topic": "gamma", "keywords": ["gamma0", "gamma1", "gamma2", "gamma3", "gamma4"]},
        ]))
        .unwrap(),
    )
    .unwrap();
    let summary = EvaluationSummary {
        micro: MicroPrf {
            precision: 0.9,
            recall: 0.9,
            f1: 0.9,
        },
        per_topic_auc: [("alpha", 0.93), ("beta", 0.97), ("gamma", 0.91)]
            .into_iter()
            .map(|(t, a)| (t.to_string(), a))
            .collect(),
        micro_average_auc: 0.94,
    };
    std::fs::write(
        ws.path("summary.json"),
        serde_json::to_string(&summary).unwrap(),
    )
    .unwrap();

    let output = run(&[
        "analyze-keywords",
        "--model",
        &ws.arg("model.bin"),
        "--keywords",
        &ws.arg("keywords.json"),
        "--auc",
        &ws.arg("summary.json"),
        "--out",
        &ws.arg("report.json"),
    ]);
    assert_exit(&output, 0);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("report.json")).unwrap()).unwrap();

    let model = lbl2vec::embedding::load(ws.path("model.bin")).unwrap();
    let topics = lbl2vec::labeling::load_topics(ws.path("keywords.json")).unwrap();
    let auc_map: BTreeMap<String, f64> = summary.per_topic_auc.clone();
    let direct = lbl2vec::analyze_keywords(&model, &topics, &auc_map).unwrap();

    for (key, expected) in [
        ("keyword_count_vs_auc", direct.keyword_count_vs_auc),
        ("intratopic_vs_auc", direct.intratopic_vs_auc),
        ("intertopic_vs_auc", direct.intertopic_vs_auc),
    ] {
        let tau = report[key]["tau"].as_f64().unwrap();
        let p = report[key]["p_value"].as_f64().unwrap();
        assert_eq!(tau.to_bits(), expected.tau.to_bits(), "{key} tau");
        assert_eq!(p.to_bits(), expected.p_value.to_bits(), "{key} p");
    }
}

#[test]
fn labels_and_classify_are_deterministic() {
    let ws = trained_workspace();
    make_labels(&ws);
    let labels_once = std::fs::read(ws.path("labels.json")).unwrap();
    make_labels(&ws);
    assert_eq!(labels_once, std::fs::read(ws.path("labels.json")).unwrap());

    let classify_run = |out: &str| {
        let output = run(&[
            "classify",
            "--model",
            &ws.arg("model.bin"),
            "--labels",
            &ws.arg("labels.json"),
            "--out",
            &ws.arg(out),
        ]);
        assert_exit(&output, 0);
        std::fs::read(ws.path(out)).unwrap()
    };
    assert_eq!(classify_run("p1.jsonl"), classify_run("p2.jsonl"));
}

#[test]
fn subcommands_do_not_mutate_their_inputs() {
    let ws = trained_workspace();
    let before = |p: &Path| std::fs::read(p).unwrap();
    let corpus_before = before(&ws.path("corpus.jsonl"));
    let keywords_before = before(&ws.path("keywords.json"));
    let model_before = before(&ws.path("model.bin"));

    make_labels(&ws);
    classify_and_evaluate(&ws);

    assert_eq!(corpus_before, before(&ws.path("corpus.jsonl")));
    assert_eq!(keywords_before, before(&ws.path("keywords.json")));
    assert_eq!(model_before, before(&ws.path("model.bin")));
}
