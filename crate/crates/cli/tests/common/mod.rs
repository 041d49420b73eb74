//! Fixture generation and process helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lbl2vec::{Corpus, Document, TopicSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOPIC_NAMES: [&str; 3] = ["alpha", "beta", "gamma"];

/// Vocabulary words of one synthetic topic.
pub fn topic_vocabulary(name: &str) -> Vec<String> {
    (0..20).map(|i| format!("{name}{i}")).collect()
}

/// One generated document: 10% shared filler, the rest from the topic's own
/// vocabulary.
fn document_text<R: Rng>(rng: &mut R, vocab: &[String], filler: &[String], len: usize) -> String {
    let words: Vec<&str> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.1) {
                filler[rng.gen_range(0..filler.len())].as_str()
            } else {
                vocab[rng.gen_range(0..vocab.len())].as_str()
            }
        })
        .collect();
    words.join(" ")
}

/// Writes a labeled JSONL corpus of `docs_per_topic` documents per topic
/// with disjoint topical vocabularies plus shared filler words.
pub fn write_corpus(path: &Path, seed: u64, docs_per_topic: usize, doc_len: usize) {
    let filler: Vec<String> = (0..10).map(|i| format!("common{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = String::new();
    for name in TOPIC_NAMES {
        let vocab = topic_vocabulary(name);
        for _ in 0..docs_per_topic {
            let text = document_text(&mut rng, &vocab, &filler, doc_len);
            lines.push_str(&format!(
                "{}\n",
                serde_json::json!({ "text": text, "label": name })
            ));
        }
    }
    std::fs::write(path, lines).unwrap();
}

/// Writes the matching keywords file: the first three vocabulary words of
/// each topic.
pub fn write_keywords(path: &Path) {
    let topics: Vec<serde_json::Value> = TOPIC_NAMES
        .iter()
        .map(|name| {
            serde_json::json!({
                "topic": name,
                "keywords": topic_vocabulary(name)[..3].to_vec(),
            })
        })
        .collect();
    std::fs::write(path, serde_json::to_string_pretty(&topics).unwrap()).unwrap();
}

/// In-process equivalent of [`write_corpus`] + [`write_keywords`]: the
/// generated corpus, one topic spec per topic (3 keywords each), and the
/// gold label of every document.
pub fn synthetic_corpus(
    seed: u64,
    docs_per_topic: usize,
    doc_len: usize,
) -> (Corpus, Vec<TopicSpec>, Vec<String>) {
    let filler: Vec<String> = (0..10).map(|i| format!("common{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut documents = Vec::new();
    let mut gold = Vec::new();
    for name in TOPIC_NAMES {
        let vocab = topic_vocabulary(name);
        for _ in 0..docs_per_topic {
            let text = document_text(&mut rng, &vocab, &filler, doc_len);
            documents.push(Document {
                doc_id: documents.len(),
                tokens: lbl2vec::tokenize(&text),
                raw_text: text,
                gold_label: Some(name.to_string()),
            });
            gold.push(name.to_string());
        }
    }
    let topics = TOPIC_NAMES
        .iter()
        .map(|name| {
            let vocab = topic_vocabulary(name);
            let kws: Vec<&str> = vocab[..3].iter().map(String::as_str).collect();
            TopicSpec::new(*name, &kws)
        })
        .collect();
    (
        Corpus {
            documents,
            source_path: String::new(),
        },
        topics,
        gold,
    )
}

pub fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_lbl2vec"))
}

/// Runs the CLI and returns its output; panics only on spawn failure so
/// tests can assert on exit codes.
pub fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("failed to spawn lbl2vec binary")
}

pub fn assert_exit(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}
