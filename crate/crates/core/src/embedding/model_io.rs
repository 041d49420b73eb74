//! Binary model persistence.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic   8 bytes  "LBL2VEC\x01"
//! header  u32 dim, u64 vocab size, u64 doc count
//! vocab   per word: u32 byte length, UTF-8 bytes, u64 count
//! data    word, doc, output matrices, row-major f32
//! ```
//!
//! Save and load round-trip bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::matrix::Matrix;
use super::EmbeddingModel;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"LBL2VEC\x01";

/// Writes the model to `path`. Identical models produce identical bytes.
pub fn save(model: &EmbeddingModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(model.dim() as u32).to_le_bytes())?;
        w.write_all(&(model.vocabulary().len() as u64).to_le_bytes())?;
        w.write_all(&(model.n_docs() as u64).to_le_bytes())?;
        for (word, count) in model.vocabulary().word_count_pairs() {
            w.write_all(&(word.len() as u32).to_le_bytes())?;
            w.write_all(word.as_bytes())?;
            w.write_all(&count.to_le_bytes())?;
        }
        for matrix in [
            model.word_vectors(),
            model.doc_vectors(),
            model.output_vectors(),
        ] {
            for &x in matrix.data() {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        w.flush()
    })()
    .map_err(|e| Error::io(path, e))
}

/// Reads a model written by [`save`]. The vocabulary's training-only
/// settings (min_count, subsampling threshold) are not part of the file;
/// they load as inert values (1 and 0.0) since a persisted model is read
/// for scoring, not retraining.
pub fn load(path: impl AsRef<Path>) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader {
        inner: BufReader::new(file),
        path,
    };

    let mut magic = [0u8; 8];
    r.fill(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::UnrecognizedModelFile);
    }

    let dim = r.u32()? as usize;
    let vocab_size = r.u64()? as usize;
    let doc_count = r.u64()? as usize;
    if dim == 0 {
        return Err(Error::CorruptModelFile("dim is zero".into()));
    }

    let mut entries = Vec::with_capacity(vocab_size);
    for _ in 0..vocab_size {
        let len = r.u32()? as usize;
        let mut bytes = vec![0u8; len];
        r.fill(&mut bytes)?;
        let word = String::from_utf8(bytes)
            .map_err(|_| Error::CorruptModelFile("vocabulary entry is not UTF-8".into()))?;
        let count = r.u64()?;
        entries.push((word, count));
    }
    let vocabulary = Vocabulary::from_entries(entries, 1, 0.0)?;

    let word = r.matrix(vocab_size, dim)?;
    let doc = r.matrix(doc_count, dim)?;
    let output = r.matrix(vocab_size, dim)?;
    EmbeddingModel::from_parts(vocabulary, word, doc, output)
}

struct Reader<'p, R> {
    inner: R,
    path: &'p Path,
}

impl<R: Read> Reader<'_, R> {
    fn fill(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::UnexpectedEof
            } else {
                Error::io(self.path, e)
            }
        })
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.fill(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.fill(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<Matrix<f32>> {
        let mut bytes = vec![0u8; rows * cols * 4];
        self.fill(&mut bytes)?;
        let data = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Ok(Matrix::from_vec(rows, cols, data))
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write as _;

    use super::*;
    use crate::corpus::{build_vocabulary, Corpus};
    use crate::embedding::{train, TrainConfig};

    fn trained_fixture() -> EmbeddingModel {
        let corpus = Corpus::from_texts(&["a b c a b", "c c b a", "b a c"]).unwrap();
        let vocab = build_vocabulary(&corpus, 1, 0.0).unwrap();
        let config = TrainConfig {
            dim: 6,
            epochs: 2,
            window: 2,
            negatives: 2,
            seed: 11,
            ..TrainConfig::default()
        };
        train(&corpus, vocab, &config).unwrap()
    }

    #[test]
    fn round_trip_is_bitwise_identical() {
        let model = trained_fixture();
        let dir = tempfile::tempdir().unwrap();
        let path_a = dir.path().join("a.bin");
        let path_b = dir.path().join("b.bin");

        save(&model, &path_a).unwrap();
        let loaded = load(&path_a).unwrap();
        assert!(model.persisted_eq(&loaded));

        // Re-saving the loaded model reproduces the file byte for byte.
        save(&loaded, &path_b).unwrap();
        assert_eq!(
            std::fs::read(&path_a).unwrap(),
            std::fs::read(&path_b).unwrap()
        );
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bogus.bin");
        std::fs::File::create(&path)
            .unwrap()
            .write_all(b"NOTAMODEL___")
            .unwrap();
        let err = load(&path).unwrap_err();
        assert_eq!(err.to_string(), "unrecognized model file");
    }

    #[test]
    fn truncated_file_is_rejected() {
        let model = trained_fixture();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        save(&model, &path).unwrap();

        let bytes = std::fs::read(&path).unwrap();
        let truncated_path = dir.path().join("truncated.bin");
        // Cut inside the word matrix.
        std::fs::write(&truncated_path, &bytes[..bytes.len() - 17]).unwrap();
        let err = load(&truncated_path).unwrap_err();
        assert_eq!(err.to_string(), "unexpected end of file");
    }
}
