//! File formats shared across the toolkit.
//!
//! Matrices travel as TSV with a header row of column labels and a first
//! column of row labels. Documents arrive as JSON Lines (`id`, `text`,
//! optional `covariates`). Covariate tables are delimited text with a
//! header whose first column is `id` (tab or comma, sniffed). Manifests are
//! pretty-printed JSON. Values render through the shortest round-trip float
//! formatting, so write-read-write cycles are byte-stable.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{AuxiliaryTable, CorpusMatrix, CovariateRecords, Document};
use crate::numerics::{Matrix, NumericsError};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: non-numeric value in column {column:?}")]
    NonNumericValue {
        path: String,
        line: usize,
        column: String,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Writes a labeled matrix: header `corner<TAB>col...`, then one row label
/// plus values per line.
pub fn write_matrix_tsv<T: Scalar>(
    path: &Path,
    matrix: &Matrix<T>,
    row_labels: &[String],
    col_labels: &[String],
    corner: &str,
) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        write!(out, "{corner}")?;
        for label in col_labels {
            write!(out, "\t{label}")?;
        }
        writeln!(out)?;
        for (i, label) in row_labels.iter().enumerate() {
            write!(out, "{label}")?;
            for &v in matrix.row(i) {
                write!(out, "\t{v}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write().map_err(|e| io_err(path, e))
}

/// Reads a labeled matrix back; returns `(matrix, row_labels, col_labels)`.
pub fn read_matrix_tsv<T: Scalar>(
    path: &Path,
) -> Result<(Matrix<T>, Vec<String>, Vec<String>), IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing header row"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let col_labels: Vec<String> = header.split('\t').skip(1).map(str::to_string).collect();
    let mut row_labels = Vec::new();
    let mut data: Vec<T> = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let label = fields
            .next()
            .ok_or_else(|| parse_err(path, idx + 1, "missing row label"))?;
        row_labels.push(label.to_string());
        let mut count = 0usize;
        for field in fields {
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(path, idx + 1, format!("bad number {field:?}")))?;
            data.push(cast(value));
            count += 1;
        }
        if count != col_labels.len() {
            return Err(parse_err(
                path,
                idx + 1,
                format!("expected {} values, found {count}", col_labels.len()),
            ));
        }
    }
    let matrix = Matrix::from_vec(row_labels.len(), col_labels.len(), data)?;
    Ok((matrix, row_labels, col_labels))
}

/// Corpus convention: rows are vocabulary words, columns are document ids.
pub fn write_corpus_tsv<T: Scalar>(path: &Path, corpus: &CorpusMatrix<T>) -> Result<(), IoError> {
    write_matrix_tsv(
        path,
        &corpus.scores,
        &corpus.vocabulary,
        &corpus.doc_ids,
        "word",
    )
}

pub fn read_corpus_tsv<T: Scalar>(path: &Path) -> Result<CorpusMatrix<T>, IoError> {
    let (scores, vocabulary, doc_ids) = read_matrix_tsv(path)?;
    Ok(CorpusMatrix {
        vocabulary,
        doc_ids,
        scores,
    })
}

/// Auxiliary convention: rows are documents, columns are covariates.
pub fn write_aux_tsv<T: Scalar>(path: &Path, aux: &AuxiliaryTable<T>) -> Result<(), IoError> {
    write_matrix_tsv(path, &aux.values, &aux.doc_ids, &aux.columns, "id")
}

pub fn read_aux_tsv<T: Scalar>(path: &Path) -> Result<AuxiliaryTable<T>, IoError> {
    let (values, doc_ids, columns) = read_matrix_tsv(path)?;
    Ok(AuxiliaryTable {
        doc_ids,
        columns,
        values,
    })
}

/// JSON Lines documents: one object per line with `id`, `text`, and an
/// optional `covariates` array.
pub fn read_documents_jsonl(path: &Path) -> Result<Vec<Document>, IoError> {
    #[derive(serde::Deserialize)]
    struct Record {
        id: String,
        text: String,
        #[serde(default)]
        covariates: Option<Vec<f64>>,
    }
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut docs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)
            .map_err(|e| parse_err(path, idx + 1, e.to_string()))?;
        docs.push(Document {
            id: record.id,
            text: record.text,
            covariates: record.covariates,
        });
    }
    Ok(docs)
}

/// Delimited covariate table: header with first column `id`, then one row
/// per document. The delimiter is sniffed from the header (tab wins over
/// comma).
pub fn read_covariate_records(path: &Path) -> Result<CovariateRecords, IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing header row"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let delimiter = if header.contains('\t') { '\t' } else { ',' };
    let mut fields = header.split(delimiter);
    let first = fields.next().unwrap_or_default();
    if first.trim() != "id" {
        return Err(parse_err(
            path,
            1,
            format!("first header column must be \"id\", found {first:?}"),
        ));
    }
    let columns: Vec<String> = fields.map(|f| f.trim().to_string()).collect();
    let mut by_id = HashMap::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(delimiter);
        let id = fields
            .next()
            .ok_or_else(|| parse_err(path, idx + 1, "missing id"))?
            .trim()
            .to_string();
        let mut values = Vec::with_capacity(columns.len());
        for (col, field) in fields.enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| IoError::NonNumericValue {
                path: path.display().to_string(),
                line: idx + 1,
                column: columns
                    .get(col)
                    .cloned()
                    .unwrap_or_else(|| format!("column {}", col + 2)),
            })?;
            values.push(value);
        }
        if values.len() != columns.len() {
            return Err(parse_err(
                path,
                idx + 1,
                format!("expected {} values, found {}", columns.len(), values.len()),
            ));
        }
        by_id.insert(id, values);
    }
    Ok(CovariateRecords { columns, by_id })
}

/// Pretty-printed JSON with a trailing newline; field order follows the
/// struct, so output is byte-stable.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| IoError::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    out.write_all(b"\n").map_err(|e| io_err(path, e))?;
    out.flush().map_err(|e| io_err(path, e))
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D, IoError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| IoError::Json {
        path: path.display().to_string(),
        source: e,
    })
}

/// Writes plain text (reports).
pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}
