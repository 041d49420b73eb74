//! Corpus ingestion, tokenization, and vocabulary construction.
//!
//! The corpus file format is JSONL: one object per line with a required
//! `text` field and an optional `label` field (gold labels are used by
//! evaluation only, never by training).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::DocId;

/// A single ingested document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    /// Dense 0-based id equal to the document's line index in the source file.
    pub doc_id: DocId,
    pub raw_text: String,
    /// Lowercased tokens, in text order.
    pub tokens: Vec<String>,
    /// Gold topic name, if the source line carried a `label` field.
    pub gold_label: Option<String>,
}

/// An ordered collection of documents with contiguous ids.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub source_path: String,
}

impl Corpus {
    /// Builds a corpus from raw texts, tokenizing each one. Ids follow input order.
    pub fn from_texts<S: AsRef<str>>(texts: &[S]) -> Result<Corpus> {
        if texts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let documents = texts
            .iter()
            .enumerate()
            .map(|(doc_id, text)| Document {
                doc_id,
                raw_text: text.as_ref().to_string(),
                tokens: tokenize(text.as_ref()),
                gold_label: None,
            })
            .collect();
        Ok(Corpus {
            documents,
            source_path: String::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Gold labels indexed by doc id (`None` where the source had no label).
    pub fn gold_labels(&self) -> Vec<Option<&str>> {
        self.documents
            .iter()
            .map(|d| d.gold_label.as_deref())
            .collect()
    }
}

/// Lowercases the input and splits it on Unicode whitespace, stripping
/// leading and trailing non-alphanumeric characters from each token.
/// Tokens that become empty are dropped; purely numeric tokens are kept.
///
/// Punctuation inside a token survives: `"NASA's"` tokenizes to `"nasa's"`.
pub fn tokenize(raw_text: &str) -> Vec<String> {
    raw_text
        .to_lowercase()
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// Reads a JSONL corpus file: one object per line, required `text` field,
/// optional `label`. Documents keep file order; `doc_id` equals line index.
pub fn ingest_jsonl(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut documents = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line_no = idx + 1;
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
                line: line_no,
                message: e.to_string(),
            })?;
        let text = match value.get("text") {
            None => return Err(Error::MissingText { line: line_no }),
            Some(serde_json::Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::TextNotString { line: line_no }),
        };
        let gold_label = value
            .get("label")
            .and_then(|v| v.as_str())
            .map(str::to_string);
        documents.push(Document {
            doc_id: idx,
            tokens: tokenize(&text),
            raw_text: text,
            gold_label,
        });
    }
    if documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(Corpus {
        documents,
        source_path: path.display().to_string(),
    })
}

/// Retained words with frequencies, the unigram^0.75 noise distribution for
/// negative sampling, and the frequent-word subsampling threshold.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    words: Vec<String>,
    word_to_index: HashMap<String, u32>,
    counts: Vec<u64>,
    total_tokens: u64,
    min_count: u32,
    subsample_threshold: f64,
    /// Normalized noise probabilities, index-aligned with `words`.
    noise_probabilities: Vec<f64>,
    /// Cumulative sums of `noise_probabilities` for inverse-CDF sampling.
    noise_cumulative: Vec<f64>,
}

impl Vocabulary {
    /// Assembles a vocabulary from already-filtered (word, count) pairs.
    /// Pairs must be in final index order.
    pub(crate) fn from_entries(
        entries: Vec<(String, u64)>,
        min_count: u32,
        subsample_threshold: f64,
    ) -> Result<Vocabulary> {
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary { min_count });
        }
        let mut words = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        let mut word_to_index = HashMap::with_capacity(entries.len());
        for (index, (word, count)) in entries.into_iter().enumerate() {
            word_to_index.insert(word.clone(), index as u32);
            words.push(word);
            counts.push(count);
        }
        let total_tokens = counts.iter().sum();

        // Noise distribution for negative sampling: unigram count^0.75.
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
        let norm: f64 = weights.iter().sum();
        let noise_probabilities: Vec<f64> = weights.iter().map(|w| w / norm).collect();
        let mut acc = 0.0;
        let noise_cumulative = noise_probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();

        Ok(Vocabulary {
            words,
            word_to_index,
            counts,
            total_tokens,
            min_count,
            subsample_threshold,
            noise_probabilities,
            noise_cumulative,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.word_to_index.get(word).map(|&i| i as usize)
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts[index]
    }

    /// Total occurrences of retained words across the corpus.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn min_count(&self) -> u32 {
        self.min_count
    }

    pub fn subsample_threshold(&self) -> f64 {
        self.subsample_threshold
    }

    /// The normalized negative-sampling distribution (sums to 1).
    pub fn noise_probabilities(&self) -> &[f64] {
        &self.noise_probabilities
    }

    /// Draws one word index from the noise distribution.
    pub fn sample_noise<R: Rng>(&self, rng: &mut R) -> usize {
        let r: f64 = rng.gen();
        self.noise_cumulative
            .partition_point(|&c| c <= r)
            .min(self.words.len() - 1)
    }

    /// Probability of keeping an occurrence of `index` under frequent-word
    /// subsampling; 1.0 when subsampling is disabled (threshold <= 0).
    pub fn keep_probability(&self, index: usize) -> f64 {
        let t = self.subsample_threshold;
        if t <= 0.0 {
            return 1.0;
        }
        let f = self.counts[index] as f64 / self.total_tokens as f64;
        (((f / t).sqrt() + 1.0) * t / f).min(1.0)
    }

    pub(crate) fn word_count_pairs(&self) -> impl Iterator<Item = (&str, u64)> {
        self.words
            .iter()
            .map(String::as_str)
            .zip(self.counts.iter().copied())
    }
}

/// Counts tokens over the corpus and keeps words occurring at least
/// `min_count` times. Word indices are assigned by descending frequency,
/// ties broken alphabetically, so the vocabulary does not depend on hash
/// iteration order.
pub fn build_vocabulary(
    corpus: &Corpus,
    min_count: u32,
    subsample_threshold: f64,
) -> Result<Vocabulary> {
    if min_count < 1 {
        return Err(Error::InvalidParameter("min_count must be >= 1".into()));
    }
    if !subsample_threshold.is_finite() || subsample_threshold < 0.0 {
        return Err(Error::InvalidParameter(
            "subsample_threshold must be finite and >= 0".into(),
        ));
    }

    let mut freq: HashMap<&str, u64> = HashMap::new();
    for doc in &corpus.documents {
        for token in &doc.tokens {
            *freq.entry(token.as_str()).or_insert(0) += 1;
        }
    }

    let mut entries: Vec<(String, u64)> = freq
        .into_iter()
        .filter(|&(_, c)| c >= u64::from(min_count))
        .map(|(w, c)| (w.to_string(), c))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    Vocabulary::from_entries(entries, min_count, subsample_threshold)
}
