use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use lbl2vec::embedding::train_with_summary;
use lbl2vec::evaluation::{micro_average_roc, roc_csv, EvaluationSummary, RocCurve};
use lbl2vec::labeling::{load_labels, load_topics, save_labels, LabelEmbedding};
use lbl2vec::lof::LofParams;
use lbl2vec::retrieval::{load_predictions, save_predictions};
use lbl2vec::{
    analyze_keywords as keyword_analysis, build_vocabulary, classify as classify_docs,
    compute_label_embedding, ingest_jsonl, micro_prf, retrieve as retrieve_docs, roc_auc,
    AlphaConfig, Error, LabelParams, TrainConfig,
};
use serde::Serialize;

use crate::{
    require_input, AnalyzeKeywordsArgs, ClassifyArgs, CliError, CliResult, EvaluateArgs,
    LabelsArgs, RetrieveArgs, TrainArgs,
};

pub(crate) fn train(args: TrainArgs) -> CliResult {
    require_input(&args.corpus)?;
    let corpus = ingest_jsonl(&args.corpus)?;
    let vocabulary = build_vocabulary(&corpus, args.min_count, args.subsample)?;
    let config = TrainConfig {
        dim: args.dim,
        epochs: args.epochs,
        window: args.window,
        negatives: args.negatives,
        initial_lr: args.lr,
        min_lr: args.min_lr,
        seed: args.seed,
        workers: args.workers,
    };
    let (model, summary) = train_with_summary(&corpus, vocabulary, &config)?;
    lbl2vec::embedding::save(&model, &args.out)?;
    println!("documents: {}", corpus.len());
    println!("tokens per epoch: {}", summary.tokens_per_epoch);
    println!("vocabulary size: {}", model.vocabulary().len());
    println!("final loss: {:.6}", summary.final_loss);
    println!("model written to {}", args.out.display());
    Ok(())
}

pub(crate) fn labels(args: LabelsArgs) -> CliResult {
    require_input(&args.model)?;
    require_input(&args.keywords)?;
    let model = lbl2vec::embedding::load(&args.model)?;
    let topics = load_topics(&args.keywords)?;
    let params = LabelParams {
        s: args.s,
        d_min: args.dmin,
        d_max: args.dmax,
        lof: LofParams {
            k: args.lof_k,
            score_threshold: args.lof_threshold,
        },
    };
    // Surface validation problems before any per-topic work.
    params.resolve(model.n_docs())?;

    let mut labels = Vec::with_capacity(topics.len());
    for topic in &topics {
        let (label, _candidates) = compute_label_embedding(&model, topic, &params)?;
        println!(
            "topic {}: {} candidates, {} kept{}",
            label.topic,
            label.candidate_count,
            label.kept_count,
            if label.oov_keywords.is_empty() {
                String::new()
            } else {
                format!(", {} OOV keyword(s): {:?}", label.oov_keywords.len(), label.oov_keywords)
            }
        );
        labels.push(label);
    }
    save_labels(&labels, &args.out)?;
    println!("{} label embedding(s) written to {}", labels.len(), args.out.display());
    Ok(())
}

fn find_label<'a>(labels: &'a [LabelEmbedding], topic: &str) -> Result<&'a LabelEmbedding, Error> {
    labels
        .iter()
        .find(|l| l.topic == topic)
        .ok_or_else(|| Error::TopicNotFound(topic.to_string()))
}

#[derive(Serialize)]
struct RetrievedDoc {
    doc_id: usize,
    similarity: f64,
}

pub(crate) fn retrieve(args: RetrieveArgs) -> CliResult {
    require_input(&args.model)?;
    require_input(&args.labels)?;
    let model = lbl2vec::embedding::load(&args.model)?;
    let labels = load_labels(&args.labels)?;
    let label = find_label(&labels, &args.topic)?;
    let hits = retrieve_docs(&model, label, args.alpha)?;

    let file = File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;

    let mut w = BufWriter::new(file);
    for (doc_id, similarity) in &hits {
        let line = serde_json::to_string(&RetrievedDoc {
            doc_id: *doc_id,
            similarity: *similarity,
        })
        .map_err(|e| CliError::usage(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| Error::io(&args.out, e))?;
    }
    w.flush().map_err(|e| Error::io(&args.out, e))?;
    println!(
        "{} document(s) above alpha {} for topic {} written to {}",
        hits.len(),
        args.alpha,
        args.topic,
        args.out.display()
    );
    Ok(())
}

pub(crate) fn classify(args: ClassifyArgs) -> CliResult {
    require_input(&args.model)?;
    require_input(&args.labels)?;
    let model = lbl2vec::embedding::load(&args.model)?;
    let labels = load_labels(&args.labels)?;

    let mut alphas = AlphaConfig::uniform(args.alpha);
    if let Some(path) = &args.alphas {
        require_input(path)?;
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let per_topic: BTreeMap<String, f64> = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| {
                CliError::from(Error::InvalidParameter(format!(
                    "alphas file {}: {e}",
                    path.display()
                )))
            })?;
        alphas.per_topic = per_topic;
    }

    let predictions = classify_docs(&model, &labels, &alphas)?;
    save_predictions(&predictions, &args.out)?;
    let accepted = predictions.iter().filter(|p| p.accepted).count();
    println!(
        "{} document(s) classified ({} accepted, {} rejected), written to {}",
        predictions.len(),
        accepted,
        predictions.len() - accepted,
        args.out.display()
    );
    Ok(())
}

pub(crate) fn evaluate(args: EvaluateArgs) -> CliResult {
    require_input(&args.corpus)?;
    require_input(&args.predictions)?;
    let corpus = ingest_jsonl(&args.corpus)?;
    let gold = corpus.gold_labels();
    let records = load_predictions(&args.predictions)?;

    let prf = micro_prf(&records, &gold)?;

    // One-vs-rest scores per topic over every document.
    let topics: Vec<String> = records
        .first()
        .map(|r| r.scores.keys().cloned().collect())
        .unwrap_or_default();
    if topics.is_empty() {
        return Err(CliError::from(Error::InvalidParameter(
            "predictions carry no per-topic scores".into(),
        )));
    }
    let mut per_topic_pairs: Vec<(Vec<f64>, Vec<bool>)> = Vec::with_capacity(topics.len());
    let mut curves: Vec<(String, RocCurve)> = Vec::with_capacity(topics.len() + 1);
    let mut per_topic_auc = BTreeMap::new();
    for topic in &topics {
        let mut scores = Vec::with_capacity(records.len());
        let mut positives = Vec::with_capacity(records.len());
        for record in &records {
            let score = record.scores.get(topic).copied().ok_or_else(|| {
                CliError::from(Error::InvalidParameter(format!(
                    "document {} is missing a score for topic {topic:?}",
                    record.doc_id
                )))
            })?;
            let gold_label = gold
                .get(record.doc_id)
                .copied()
                .flatten()
                .ok_or(Error::MissingGoldLabel(record.doc_id))?;
            scores.push(score);
            positives.push(gold_label == topic);
        }
        let curve = roc_auc(&scores, &positives)?;
        per_topic_auc.insert(topic.clone(), curve.auc);
        curves.push((topic.clone(), curve));
        per_topic_pairs.push((scores, positives));
    }

    let micro_curve = if per_topic_pairs.len() >= 2 {
        micro_average_roc(&per_topic_pairs)?
    } else {
        // Pooling one topic is that topic's curve.
        curves[0].1.clone()
    };
    let micro_average_auc = micro_curve.auc;
    curves.push(("micro-average".to_string(), micro_curve));

    println!("micro precision: {:.4}", prf.precision);
    println!("micro recall:    {:.4}", prf.recall);
    println!("micro f1:        {:.4}", prf.f1);
    for (topic, auc) in &per_topic_auc {
        println!("auc[{topic}]: {auc:.4}");
    }
    println!("micro-average auc: {micro_average_auc:.4}");

    if let Some(path) = &args.roc_csv {
        std::fs::write(path, roc_csv(&curves)).map_err(|e| Error::io(path, e))?;
        println!("ROC curves written to {}", path.display());
    }
    if let Some(path) = &args.summary {
        let summary = EvaluationSummary {
            micro: prf,
            per_topic_auc,
            micro_average_auc,
        };
        write_json_pretty(path, &summary)?;
        println!("summary written to {}", path.display());
    }
    Ok(())
}

pub(crate) fn analyze_keywords(args: AnalyzeKeywordsArgs) -> CliResult {
    require_input(&args.model)?;
    require_input(&args.keywords)?;
    require_input(&args.auc)?;
    let model = lbl2vec::embedding::load(&args.model)?;
    let topics = load_topics(&args.keywords)?;
    let file = File::open(&args.auc).map_err(|e| Error::io(&args.auc, e))?;
    let summary: EvaluationSummary =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| {
            CliError::from(Error::InvalidParameter(format!(
                "summary file {}: {e}",
                args.auc.display()
            )))
        })?;

    let analysis = keyword_analysis(&model, &topics, &summary.per_topic_auc)?;
    for (name, r) in [
        ("keyword count vs auc", &analysis.keyword_count_vs_auc),
        ("intratopic similarity vs auc", &analysis.intratopic_vs_auc),
        ("intertopic similarity vs auc", &analysis.intertopic_vs_auc),
    ] {
        println!("{name}: tau = {:.4}, p = {:.4}, n = {}", r.tau, r.p_value, r.n);
    }
    write_json_pretty(&args.out, &analysis)?;
    println!("report written to {}", args.out.display());
    Ok(())
}

fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::usage(format!("writing {}: {e}", path.display())))?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
