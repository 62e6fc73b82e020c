//! Corpus construction: turning raw documents and covariate records into the
//! word-score matrix `Y` and the auxiliary matrix `Z`.
//!
//! Scores are raw term frequencies. The vocabulary is the lexicographically
//! sorted set of all tokens, frozen at build time; later documents projected
//! onto a frozen vocabulary drop out-of-vocabulary tokens with a count
//! reported.

mod tokenize;

pub use tokenize::{porter_stem, tokenize, TokenizeOptions};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::numerics::Matrix;
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("every document tokenized to nothing")]
    AllDocumentsEmpty,
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("covariates missing for document {0:?}")]
    MissingCovariates(String),
    #[error("non-numeric covariate value at row {row}, column {column:?}")]
    NonNumericValue { row: usize, column: String },
    #[error("document {id:?} has {got} covariates, expected {expected}")]
    CovariateLengthMismatch {
        id: String,
        got: usize,
        expected: usize,
    },
    #[error("corpus is empty")]
    EmptyCorpus,
}

/// One raw input document.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub covariates: Option<Vec<f64>>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            covariates: None,
        }
    }
}

/// The word-score matrix `Y` (words x documents) with its labels.
#[derive(Debug, Clone)]
pub struct CorpusMatrix<T> {
    pub vocabulary: Vec<String>,
    pub doc_ids: Vec<String>,
    /// `W x D`, row i = vocabulary\[i\], column j = doc_ids\[j\].
    pub scores: Matrix<T>,
}

impl<T: Scalar> CorpusMatrix<T> {
    pub fn word_count(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    /// Mean token count per document.
    pub fn mean_document_length(&self) -> f64 {
        if self.doc_count() == 0 {
            return 0.0;
        }
        let total: f64 = self.scores.iter().map(|v| v.to_f64_lossy()).sum();
        total / self.doc_count() as f64
    }
}

/// Per-document external covariates, row-aligned with a [`CorpusMatrix`].
#[derive(Debug, Clone)]
pub struct AuxiliaryTable<T> {
    pub doc_ids: Vec<String>,
    pub columns: Vec<String>,
    /// `D x p`.
    pub values: Matrix<T>,
}

impl<T: Scalar> AuxiliaryTable<T> {
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            doc_ids: indices.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            columns: self.columns.clone(),
            values: self.values.select_rows(indices),
        }
    }
}

/// Covariate records keyed by document id, as parsed from a table or from
/// inline document fields.
#[derive(Debug, Clone)]
pub struct CovariateRecords {
    pub columns: Vec<String>,
    pub by_id: HashMap<String, Vec<f64>>,
}

/// Builds the raw-count matrix `Y` from tokenized documents.
pub fn build_corpus<T: Scalar>(
    docs: &[Document],
    options: &TokenizeOptions,
) -> Result<CorpusMatrix<T>, CorpusError> {
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut seen = HashSet::new();
    for doc in docs {
        if !seen.insert(doc.id.as_str()) {
            return Err(CorpusError::DuplicateDocId(doc.id.clone()));
        }
    }
    let tokenized: Vec<Vec<String>> = docs
        .iter()
        .map(|d| tokenize(&d.text, options))
        .collect();
    let vocabulary: Vec<String> = tokenized
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if vocabulary.is_empty() {
        return Err(CorpusError::AllDocumentsEmpty);
    }
    let index: BTreeMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let mut scores = Matrix::zeros(vocabulary.len(), docs.len());
    for (j, tokens) in tokenized.iter().enumerate() {
        for token in tokens {
            let i = index[token.as_str()];
            let v = scores.get(i, j) + T::one();
            scores.set(i, j, v);
        }
    }
    Ok(CorpusMatrix {
        vocabulary,
        doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
        scores,
    })
}

/// Projects documents onto a frozen vocabulary. Out-of-vocabulary tokens are
/// dropped; the second return value counts how many were dropped.
pub fn vectorize_with_vocabulary<T: Scalar>(
    vocabulary: &[String],
    docs: &[Document],
    options: &TokenizeOptions,
) -> Result<(CorpusMatrix<T>, usize), CorpusError> {
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut seen = HashSet::new();
    for doc in docs {
        if !seen.insert(doc.id.as_str()) {
            return Err(CorpusError::DuplicateDocId(doc.id.clone()));
        }
    }
    let index: HashMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let mut scores = Matrix::zeros(vocabulary.len(), docs.len());
    let mut dropped = 0usize;
    for (j, doc) in docs.iter().enumerate() {
        for token in tokenize(&doc.text, options) {
            match index.get(token.as_str()) {
                Some(&i) => {
                    let v = scores.get(i, j) + T::one();
                    scores.set(i, j, v);
                }
                None => dropped += 1,
            }
        }
    }
    Ok((
        CorpusMatrix {
            vocabulary: vocabulary.to_vec(),
            doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
            scores,
        },
        dropped,
    ))
}

/// Fraction of exactly-zero cells of `Y`.
pub fn corpus_sparsity<T: Scalar>(corpus: &CorpusMatrix<T>) -> f64 {
    matrix_sparsity(&corpus.scores)
}

pub fn matrix_sparsity<T: Scalar>(m: &Matrix<T>) -> f64 {
    let cells = m.rows() * m.cols();
    if cells == 0 {
        return 0.0;
    }
    let zeros = m.iter().filter(|v| **v == T::zero()).count();
    zeros as f64 / cells as f64
}

/// Reorders covariate records to match the corpus document order.
pub fn attach_auxiliary<T: Scalar>(
    corpus: &CorpusMatrix<T>,
    records: &CovariateRecords,
) -> Result<AuxiliaryTable<T>, CorpusError> {
    let p = records.columns.len();
    let mut values = Matrix::zeros(corpus.doc_count(), p);
    for (row, id) in corpus.doc_ids.iter().enumerate() {
        let record = records
            .by_id
            .get(id)
            .ok_or_else(|| CorpusError::MissingCovariates(id.clone()))?;
        if record.len() != p {
            return Err(CorpusError::CovariateLengthMismatch {
                id: id.clone(),
                got: record.len(),
                expected: p,
            });
        }
        for (col, &v) in record.iter().enumerate() {
            values.set(row, col, cast(v));
        }
    }
    Ok(AuxiliaryTable {
        doc_ids: corpus.doc_ids.clone(),
        columns: records.columns.clone(),
        values,
    })
}

/// Builds covariate records from documents carrying inline covariates.
/// Column names default to `z1..zp`.
pub fn records_from_documents(docs: &[Document]) -> Result<CovariateRecords, CorpusError> {
    let p = docs
        .iter()
        .find_map(|d| d.covariates.as_ref().map(Vec::len))
        .unwrap_or(0);
    let mut by_id = HashMap::new();
    for doc in docs {
        if let Some(cov) = &doc.covariates {
            if cov.len() != p {
                return Err(CorpusError::CovariateLengthMismatch {
                    id: doc.id.clone(),
                    got: cov.len(),
                    expected: p,
                });
            }
            by_id.insert(doc.id.clone(), cov.clone());
        }
    }
    Ok(CovariateRecords {
        columns: (1..=p).map(|i| format!("z{i}")).collect(),
        by_id,
    })
}
