use std::cell::UnsafeCell;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use super::negative_sampling::negative_sampling_update;
use super::{EmbeddingModel, TrainConfig};
use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};

/// Aggregate training counters reported by [`train_with_summary`].
#[derive(Debug, Clone, Copy)]
pub struct TrainSummary {
    /// Retained-token occurrences processed per epoch.
    pub tokens_per_epoch: u64,
    /// Mean negative-sampling loss per update over the final epoch.
    pub final_loss: f64,
}

/// Shared trainable state. Workers update it hogwild-style: concurrent,
/// unsynchronized, racy on purpose — stochastic gradient descent tolerates
/// the occasional lost update, and single-worker runs stay fully defined
/// and bitwise reproducible.
struct RacyCell<T>(UnsafeCell<T>);

unsafe impl<T: Send> Sync for RacyCell<T> {}

impl<T> RacyCell<T> {
    fn new(value: T) -> Self {
        RacyCell(UnsafeCell::new(value))
    }

    #[allow(clippy::mut_from_ref)]
    unsafe fn get_mut_racy(&self) -> &mut T {
        &mut *self.0.get()
    }

    fn into_inner(self) -> T {
        self.0.into_inner()
    }
}

struct Params {
    word: Matrix<f32>,
    doc: Matrix<f32>,
    output: Matrix<f32>,
}

/// Per-epoch loss accumulator of one worker.
#[derive(Clone, Default)]
struct EpochLoss {
    sum: f64,
    updates: u64,
}

/// Trains jointly embedded word and document vectors. See the module
/// documentation for the architecture; configuration gaps follow common
/// Skip-gram defaults.
pub fn train(
    corpus: &Corpus,
    vocabulary: Vocabulary,
    config: &TrainConfig,
) -> Result<EmbeddingModel> {
    train_with_summary(corpus, vocabulary, config).map(|(model, _)| model)
}

/// [`train`], also reporting token throughput and the final-epoch loss.
pub fn train_with_summary(
    corpus: &Corpus,
    vocabulary: Vocabulary,
    config: &TrainConfig,
) -> Result<(EmbeddingModel, TrainSummary)> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    // Token ids per document, restricted to retained vocabulary words.
    let encoded: Vec<Vec<u32>> = corpus
        .documents
        .iter()
        .map(|doc| {
            doc.tokens
                .iter()
                .filter_map(|t| vocabulary.index_of(t).map(|i| i as u32))
                .collect()
        })
        .collect();
    let tokens_per_epoch: u64 = encoded.iter().map(|t| t.len() as u64).sum();
    let total_tokens = (tokens_per_epoch * config.epochs as u64).max(1);

    let n_docs = corpus.len();
    let dim = config.dim;

    // Input matrices start uniform in [-0.5/dim, +0.5/dim], the output
    // matrix at zero; words first, then documents, so a fixed seed pins
    // every draw.
    let mut init_rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bound = 0.5 / dim as f32;
    let word = Matrix::fill_with(vocabulary.len(), dim, || init_rng.gen_range(-bound..=bound));
    let doc = Matrix::fill_with(n_docs, dim, || init_rng.gen_range(-bound..=bound));
    let output = Matrix::zeros(vocabulary.len(), dim);

    let params = RacyCell::new(Params { word, doc, output });
    let processed = AtomicU64::new(0);
    let workers = config.workers.min(n_docs);

    let mut epoch_losses: Vec<Vec<EpochLoss>> = Vec::new();
    if workers == 1 {
        let worker = Worker {
            vocabulary: &vocabulary,
            encoded: &encoded,
            config,
            params: &params,
            processed: &processed,
            total_tokens,
        };
        epoch_losses.push(worker.run(0, 0..n_docs));
    } else {
        let worker = Worker {
            vocabulary: &vocabulary,
            encoded: &encoded,
            config,
            params: &params,
            processed: &processed,
            total_tokens,
        };
        let losses = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let worker = &worker;
                    let range = w * n_docs / workers..(w + 1) * n_docs / workers;
                    scope.spawn(move || worker.run(w, range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect::<Vec<_>>()
        });
        epoch_losses.extend(losses);
    }

    let final_loss = {
        let last: Vec<&EpochLoss> = epoch_losses
            .iter()
            .filter_map(|per_epoch| per_epoch.last())
            .collect();
        let updates: u64 = last.iter().map(|l| l.updates).sum();
        let sum: f64 = last.iter().map(|l| l.sum).sum();
        if updates == 0 {
            0.0
        } else {
            sum / updates as f64
        }
    };

    let Params { word, doc, output } = params.into_inner();
    let model = EmbeddingModel::from_parts(vocabulary, word, doc, output)?;
    debug_assert!(!model.has_non_finite(), "training produced NaN/Inf");
    Ok((
        model,
        TrainSummary {
            tokens_per_epoch,
            final_loss,
        },
    ))
}

struct Worker<'a> {
    vocabulary: &'a Vocabulary,
    encoded: &'a [Vec<u32>],
    config: &'a TrainConfig,
    params: &'a RacyCell<Params>,
    processed: &'a AtomicU64,
    total_tokens: u64,
}

impl Worker<'_> {
    fn run(&self, worker_index: usize, docs: Range<usize>) -> Vec<EpochLoss> {
        let config = self.config;
        let stream = 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(worker_index as u64 + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(stream));
        let mut scratch = vec![0.0f32; config.dim];
        let mut sequence: Vec<u32> = Vec::new();
        let mut negatives: Vec<usize> = Vec::with_capacity(config.negatives);
        let mut losses = vec![EpochLoss::default(); config.epochs];

        for loss in losses.iter_mut() {
            for doc_id in docs.clone() {
                let tokens = &self.encoded[doc_id];
                if tokens.is_empty() {
                    continue;
                }
                let done = self.processed.fetch_add(tokens.len() as u64, Ordering::Relaxed);
                let lr = self.learning_rate(done);

                // Frequent-word subsampling, once per (document, epoch); the
                // same thinned sequence feeds both passes.
                sequence.clear();
                for &t in tokens {
                    let keep = self.vocabulary.keep_probability(t as usize);
                    if keep >= 1.0 || rng.gen::<f64>() < keep {
                        sequence.push(t);
                    }
                }

                // A worker holds the only &mut within this scope unless other
                // workers race on the same rows, which hogwild accepts.
                let params = unsafe { self.params.get_mut_racy() };

                // PV-DBOW: the document vector predicts each surviving token.
                for &target in &sequence {
                    self.sample_negatives(&mut rng, target as usize, &mut negatives);
                    loss.sum += negative_sampling_update(
                        params.doc.row_mut(doc_id),
                        &mut params.output,
                        target as usize,
                        &negatives,
                        lr,
                        &mut scratch,
                    );
                    loss.updates += 1;
                }

                // Skip-gram: each token predicts its window neighbors.
                for center in 0..sequence.len() {
                    let lo = center.saturating_sub(config.window);
                    let hi = (center + config.window).min(sequence.len() - 1);
                    for context in lo..=hi {
                        if context == center {
                            continue;
                        }
                        let target = sequence[context] as usize;
                        self.sample_negatives(&mut rng, target, &mut negatives);
                        loss.sum += negative_sampling_update(
                            params.word.row_mut(sequence[center] as usize),
                            &mut params.output,
                            target,
                            &negatives,
                            lr,
                            &mut scratch,
                        );
                        loss.updates += 1;
                    }
                }
            }
        }
        losses
    }

    /// Linear decay from initial_lr to min_lr over all tokens of all epochs.
    fn learning_rate(&self, tokens_done: u64) -> f32 {
        let config = self.config;
        let progress = (tokens_done as f64 / self.total_tokens as f64).min(1.0);
        let lr = f64::from(config.initial_lr)
            - (f64::from(config.initial_lr) - f64::from(config.min_lr)) * progress;
        lr as f32
    }

    /// Draws noise words; draws colliding with the target are skipped, so an
    /// update sees at most `config.negatives` noise rows, each distinct from
    /// the target.
    fn sample_negatives<R: Rng>(&self, rng: &mut R, target: usize, out: &mut Vec<usize>) {
        out.clear();
        for _ in 0..self.config.negatives {
            let drawn = self.vocabulary.sample_noise(rng);
            if drawn != target {
                out.push(drawn);
            }
        }
    }
}
