//! Pretrained word-embedding tables with deterministic OOV vectors and
//! mean pooling to message level.

use super::FeaturesError;
use crate::derive_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

/// Token -> dense vector table. Unknown tokens get a zero-mean normal vector
/// derived deterministically from `(token, oov_seed)`, so two tables with the
/// same seed agree on every OOV token.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingTable {
    dimension: usize,
    #[serde(
        serialize_with = "crate::serde_util::sorted_pairs",
        deserialize_with = "crate::serde_util::from_pairs"
    )]
    vectors: HashMap<String, Vec<f64>>,
    oov_seed: u64,
    oov_scale: f64,
}

impl EmbeddingTable {
    pub fn new(dimension: usize, oov_seed: u64, oov_scale: f64) -> Self {
        assert!(dimension > 0, "dimension must be positive");
        assert!(oov_scale > 0.0, "oov_scale must be positive");
        Self {
            dimension,
            vectors: HashMap::new(),
            oov_seed,
            oov_scale,
        }
    }

    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) {
        assert_eq!(vector.len(), self.dimension, "vector length mismatch");
        self.vectors.insert(token.into(), vector);
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vectors.contains_key(token)
    }

    /// Stored vector for a token, or its seeded OOV vector.
    pub fn vector(&self, token: &str) -> Vec<f64> {
        if let Some(v) = self.vectors.get(token) {
            return v.clone();
        }
        self.oov_vector(token)
    }

    fn oov_vector(&self, token: &str) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.oov_seed, token));
        let normal = Normal::new(0.0, self.oov_scale).expect("valid scale");
        (0..self.dimension).map(|_| normal.sample(&mut rng)).collect()
    }
}

/// Load a text-format embedding file: one `token v1 v2 ... vd` per line,
/// space-separated, with an optional `count dim` header line auto-detected.
pub fn load_embeddings(
    path: &Path,
    expected_dim: usize,
    oov_seed: u64,
    oov_scale: f64,
) -> Result<EmbeddingTable, FeaturesError> {
    let file = std::fs::File::open(path).map_err(|source| FeaturesError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_embeddings_from_reader(
        std::io::BufReader::new(file),
        &path.display().to_string(),
        expected_dim,
        oov_seed,
        oov_scale,
    )
}

pub fn load_embeddings_from_reader(
    reader: impl BufRead,
    path: &str,
    expected_dim: usize,
    oov_seed: u64,
    oov_scale: f64,
) -> Result<EmbeddingTable, FeaturesError> {
    let mut table = EmbeddingTable::new(expected_dim, oov_seed, oov_scale);
    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line.map_err(|source| FeaturesError::Io {
            path: path.to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        // Header form: exactly two integer fields on the first line.
        if line_no == 1
            && fields.len() == 2
            && fields.iter().all(|f| f.parse::<usize>().is_ok())
        {
            continue;
        }
        if fields.len() != expected_dim + 1 {
            return Err(FeaturesError::EmbeddingParse {
                path: path.to_string(),
                line: line_no,
                reason: format!(
                    "expected {} components, found {}",
                    expected_dim,
                    fields.len().saturating_sub(1)
                ),
            });
        }
        let token = fields[0];
        let mut vector = Vec::with_capacity(expected_dim);
        for f in &fields[1..] {
            let v: f64 = f.parse().map_err(|_| FeaturesError::EmbeddingParse {
                path: path.to_string(),
                line: line_no,
                reason: format!("invalid number {f:?}"),
            })?;
            vector.push(v);
        }
        table.insert(token, vector);
    }
    Ok(table)
}

/// Arithmetic mean of the per-token vectors; an empty token list pools to the
/// zero vector.
pub fn embed_message(tokens: &[String], table: &EmbeddingTable) -> Vec<f64> {
    let mut pooled = vec![0.0; table.dimension()];
    if tokens.is_empty() {
        return pooled;
    }
    for token in tokens {
        for (acc, v) in pooled.iter_mut().zip(table.vector(token)) {
            *acc += v;
        }
    }
    let n = tokens.len() as f64;
    for v in &mut pooled {
        *v /= n;
    }
    pooled
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn table_from(text: &str, dim: usize) -> Result<EmbeddingTable, FeaturesError> {
        load_embeddings_from_reader(Cursor::new(text.to_string()), "mem", dim, 42, 0.1)
    }

    #[test]
    fn parses_plain_lines() {
        let t = table_from("cash 0.1 0.2 0.3\n", 3).unwrap();
        assert_eq!(t.vector("cash"), vec![0.1, 0.2, 0.3]);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn auto_detects_header() {
        let t = table_from("2 3\ncash 0.1 0.2 0.3\nwin 1 2 3\n", 3).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.vector("win"), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn dimension_mismatch_reports_line() {
        let err = table_from("cash 0.1 0.2 0.3\nshort 0.1 0.2\n", 3).unwrap_err();
        match err {
            FeaturesError::EmbeddingParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn oov_vectors_are_seed_deterministic() {
        let a = table_from("cash 0.1 0.2 0.3\n", 3).unwrap();
        let b = table_from("win 1 2 3\n", 3).unwrap();
        assert_eq!(a.vector("zzzq"), b.vector("zzzq"));
        assert_ne!(a.vector("zzzq"), a.vector("zzzr"));
    }

    #[test]
    fn pooling_is_the_arithmetic_mean() {
        let mut t = EmbeddingTable::new(2, 1, 0.1);
        t.insert("u", vec![1.0, 3.0]);
        t.insert("v", vec![3.0, 5.0]);
        let toks = |s: &[&str]| s.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        assert_eq!(embed_message(&toks(&["u"]), &t), vec![1.0, 3.0]);
        assert_eq!(embed_message(&toks(&["u", "v"]), &t), vec![2.0, 4.0]);
        assert_eq!(embed_message(&[], &t), vec![0.0, 0.0]);
    }
}
