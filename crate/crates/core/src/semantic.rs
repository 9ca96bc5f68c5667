//! Embedding table and cosine similarities.
//!
//! Vectors are stored as `f32`; every similarity is accumulated in the
//! caller's scalar type (normally `f64`) so that threshold comparisons are
//! stable.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum SemanticError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("embedding file contains no vectors")]
    Empty,
    #[error("line {line}: not a valid embedding row")]
    Malformed { line: usize },
    #[error("vector for {id:?} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("vector for {0:?} is empty")]
    ZeroDimension(String),
    #[error("vector for {0:?} appears twice")]
    DuplicateId(String),
    #[error("vectors have different dimensions ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no vector for {0:?}")]
    MissingVector(String),
}

/// Per-paper dense vectors sharing one dimension.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingTable {
    dim: usize,
    ids: Vec<String>,
    data: Vec<f32>,
    index: HashMap<String, usize>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            ..Default::default()
        }
    }

    pub fn from_rows<I, S>(rows: I) -> Result<Self, SemanticError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut table: Option<EmbeddingTable> = None;
        for (id, v) in rows {
            let t = table.get_or_insert_with(|| EmbeddingTable::new(v.len()));
            t.insert(id, v)?;
        }
        table.ok_or(SemanticError::Empty)
    }

    pub fn insert(&mut self, id: impl Into<String>, vector: Vec<f32>) -> Result<(), SemanticError> {
        let id = id.into();
        if vector.is_empty() {
            return Err(SemanticError::ZeroDimension(id));
        }
        if self.dim == 0 && self.ids.is_empty() {
            self.dim = vector.len();
        }
        if vector.len() != self.dim {
            return Err(SemanticError::DimensionMismatch {
                id,
                expected: self.dim,
                found: vector.len(),
            });
        }
        if self.index.contains_key(&id) {
            return Err(SemanticError::DuplicateId(id));
        }
        self.index.insert(id.clone(), self.ids.len());
        self.ids.push(id);
        self.data.extend_from_slice(&vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Ids in file order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn vector(&self, id: &str) -> Option<&[f32]> {
        self.index.get(id).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn require(&self, id: &str) -> Result<&[f32], SemanticError> {
        self.vector(id)
            .ok_or_else(|| SemanticError::MissingVector(id.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingRow {
    id: String,
    vector: Vec<f64>,
}

/// How an embedding table lines up with a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    /// Corpus ids without a vector, ascending.
    pub missing: Vec<String>,
    /// Vector ids that are not in the corpus, ascending.
    pub unresolved: Vec<String>,
}

pub fn coverage(table: &EmbeddingTable, corpus: &Corpus) -> Coverage {
    let missing = corpus
        .records()
        .iter()
        .filter(|r| !table.contains(&r.id))
        .map(|r| r.id.clone())
        .collect();
    let mut unresolved: Vec<String> = table
        .ids()
        .iter()
        .filter(|id| !corpus.contains(id))
        .cloned()
        .collect();
    unresolved.sort_unstable();
    Coverage {
        missing,
        unresolved,
    }
}

/// Reads JSON Lines `{"id": ..., "vector": [...]}`. Blank lines and lines
/// starting with `#` (a producer's header comment) are skipped.
pub fn read_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingTable, SemanticError> {
    let mut table = EmbeddingTable::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| SemanticError::Io {
            path: PathBuf::from("<embeddings>"),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row: EmbeddingRow =
            serde_json::from_str(trimmed).map_err(|_| SemanticError::Malformed { line: i + 1 })?;
        table.insert(row.id, row.vector.into_iter().map(|x| x as f32).collect())?;
    }
    if table.is_empty() {
        return Err(SemanticError::Empty);
    }
    Ok(table)
}

/// Loads an embedding file and reports its coverage of `corpus`.
pub fn load_embeddings(
    path: impl AsRef<Path>,
    corpus: &Corpus,
) -> Result<(EmbeddingTable, Coverage), SemanticError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| SemanticError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let table = read_embeddings(BufReader::new(file)).map_err(|e| match e {
        SemanticError::Io { source, .. } => SemanticError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })?;
    let cov = coverage(&table, corpus);
    Ok((table, cov))
}

/// Writes the table in the JSON Lines contract, in insertion order.
pub fn write_embeddings<W: Write>(table: &EmbeddingTable, mut out: W) -> std::io::Result<()> {
    for (i, id) in table.ids().iter().enumerate() {
        let row = EmbeddingRow {
            id: id.clone(),
            vector: table.row(i).iter().map(|&x| f64::from(x)).collect(),
        };
        serde_json::to_writer(&mut out, &row)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn cosine_of<F: Real, A: Copy, B: Copy>(a: &[A], b: &[B], fa: impl Fn(A) -> F, fb: impl Fn(B) -> F) -> F {
    let (mut dot, mut na, mut nb) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (fa(x), fb(y));
        dot = dot + x * y;
        na = na + x * x;
        nb = nb + y * y;
    }
    if na == F::zero() || nb == F::zero() {
        return F::zero();
    }
    let c = dot / (na.sqrt() * nb.sqrt());
    c.max(-F::one()).min(F::one())
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine<F: Real>(a: &[F], b: &[F]) -> Result<F, SemanticError> {
    if a.len() != b.len() {
        return Err(SemanticError::LengthMismatch(a.len(), b.len()));
    }
    Ok(cosine_of(a, b, |x| x, |x| x))
}

/// Cosine of two stored `f32` vectors, accumulated in `F`.
pub fn cosine_stored<F: Real>(a: &[f32], b: &[f32]) -> Result<F, SemanticError> {
    if a.len() != b.len() {
        return Err(SemanticError::LengthMismatch(a.len(), b.len()));
    }
    let widen = |x: f32| F::from_f64_lossy(f64::from(x));
    Ok(cosine_of(a, b, widen, widen))
}

/// Similarities between a target and each of its references.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSimilarities<F> {
    /// `(reference id, similarity)` in the order the references were given.
    pub values: Vec<(String, F)>,
    /// References without a vector.
    pub missing: Vec<String>,
}

pub fn target_similarities<F: Real>(
    table: &EmbeddingTable,
    target: &str,
    refs: &[&str],
) -> Result<TargetSimilarities<F>, SemanticError> {
    let tv = table.require(target)?;
    let mut out = TargetSimilarities {
        values: Vec::with_capacity(refs.len()),
        missing: Vec::new(),
    };
    for &r in refs {
        match table.vector(r) {
            Some(rv) => out.values.push((r.to_string(), cosine_stored(tv, rv)?)),
            None => out.missing.push(r.to_string()),
        }
    }
    Ok(out)
}

/// Symmetric matrix of similarities among a labelled set of items.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix<F> {
    ids: Vec<String>,
    values: Vec<F>,
}

impl<F: Real> SimilarityMatrix<F> {
    /// Evaluates `sim` on the upper triangle (including the diagonal) and
    /// mirrors it, so the result is exactly symmetric.
    pub fn from_fn(ids: Vec<String>, mut sim: impl FnMut(usize, usize) -> F) -> Self {
        let n = ids.len();
        let mut values = vec![F::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let s = sim(i, j);
                values[i * n + j] = s;
                values[j * n + i] = s;
            }
        }
        SimilarityMatrix { ids, values }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.values[i * self.ids.len() + j]
    }

    /// Strictly-upper-triangle entries, row by row.
    pub fn off_diagonal(&self) -> impl Iterator<Item = F> + '_ {
        let n = self.ids.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| self.get(i, j)))
    }
}

/// Pairwise similarity matrix over the references that have vectors; the
/// second element lists references that were skipped.
pub fn pairwise_similarities<F: Real>(
    table: &EmbeddingTable,
    refs: &[&str],
) -> (SimilarityMatrix<F>, Vec<String>) {
    let mut present = Vec::with_capacity(refs.len());
    let mut missing = Vec::new();
    for &r in refs {
        match table.vector(r) {
            Some(v) => present.push((r.to_string(), v)),
            None => missing.push(r.to_string()),
        }
    }
    let vectors: Vec<&[f32]> = present.iter().map(|p| p.1).collect();
    let ids = present.into_iter().map(|p| p.0).collect();
    let m = SimilarityMatrix::from_fn(ids, |i, j| {
        cosine_stored(vectors[i], vectors[j]).expect("table rows share one dimension")
    });
    (m, missing)
}
