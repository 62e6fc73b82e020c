//! `ingest`: JSON Lines documents (plus optional covariate table) into the
//! shared TSV matrix conventions.

use std::collections::HashSet;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use semipartm_core::corpus::{
    attach_auxiliary, build_corpus, corpus_sparsity, records_from_documents,
    vectorize_with_vocabulary, TokenizeOptions,
};
use semipartm_core::io::{
    read_corpus_tsv, read_covariate_records, read_documents_jsonl, write_aux_tsv,
    write_corpus_tsv, write_json,
};
use semipartm_core::Corpus64;

use crate::error::{data, usage, CliError};

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// JSON Lines file: one {"id", "text", optional "covariates"} per line.
    #[arg(long)]
    pub docs: PathBuf,
    /// Delimited covariate table (header row, first column `id`).
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Apply Porter suffix stemming.
    #[arg(long)]
    pub stem: bool,
    /// Stop-word handling: `none` (default), `default`, or a file with one
    /// word per line.
    #[arg(long)]
    pub stop_words: Option<String>,
    /// Project onto the vocabulary of an existing corpus TSV instead of
    /// building a fresh one; out-of-vocabulary tokens are dropped.
    #[arg(long)]
    pub freeze_vocabulary: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct IngestManifest {
    command: &'static str,
    stem: bool,
    stop_words: String,
    frozen_vocabulary: bool,
    documents: usize,
    words: usize,
    sparsity: f64,
    mean_document_length: f64,
    oov_dropped: usize,
    covariate_columns: Vec<String>,
}

pub fn run(args: &IngestArgs) -> Result<(), CliError> {
    let docs = read_documents_jsonl(&args.docs)?;
    let options = tokenize_options(args.stem, args.stop_words.as_deref())?;

    let (corpus, oov_dropped): (Corpus64, usize) = match &args.freeze_vocabulary {
        Some(path) => {
            let frozen = read_corpus_tsv::<f64>(path)?;
            vectorize_with_vocabulary(&frozen.vocabulary, &docs, &options)?
        }
        None => (build_corpus(&docs, &options)?, 0),
    };

    std::fs::create_dir_all(&args.out)
        .map_err(|e| data(format!("cannot create {}: {e}", args.out.display())))?;
    write_corpus_tsv(&args.out.join("corpus.tsv"), &corpus)?;

    let records = match &args.covariates {
        Some(path) => Some(read_covariate_records(path)?),
        None => {
            let inline = records_from_documents(&docs)?;
            if inline.by_id.is_empty() {
                None
            } else {
                Some(inline)
            }
        }
    };
    let covariate_columns = match &records {
        Some(records) => {
            let aux = attach_auxiliary(&corpus, records)?;
            write_aux_tsv(&args.out.join("aux.tsv"), &aux)?;
            aux.columns
        }
        None => Vec::new(),
    };

    let manifest = IngestManifest {
        command: "ingest",
        stem: args.stem,
        stop_words: args.stop_words.clone().unwrap_or_else(|| "none".to_string()),
        frozen_vocabulary: args.freeze_vocabulary.is_some(),
        documents: corpus.doc_count(),
        words: corpus.word_count(),
        sparsity: corpus_sparsity(&corpus),
        mean_document_length: corpus.mean_document_length(),
        oov_dropped,
        covariate_columns,
    };
    write_json(&args.out.join("manifest.json"), &manifest)?;
    println!(
        "ingested {} documents, {} words, sparsity {:.4}",
        manifest.documents, manifest.words, manifest.sparsity
    );
    Ok(())
}

pub fn tokenize_options(stem: bool, stop_words: Option<&str>) -> Result<TokenizeOptions, CliError> {
    let mut options = TokenizeOptions::default();
    options.stem = stem;
    options.stop_words = match stop_words {
        None | Some("none") => None,
        Some("default") => Some(TokenizeOptions::default_stop_words()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read stop-word file {path}: {e}")))?;
            let set: HashSet<String> = text
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect();
            Some(set)
        }
    };
    Ok(options)
}
