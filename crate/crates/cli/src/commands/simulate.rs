//! `simulate`: generate one synthetic dataset and persist every matrix plus
//! a manifest with seeds and generator diagnostics.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use semipartm_core::io::{write_aux_tsv, write_corpus_tsv, write_json, write_matrix_tsv};
use semipartm_core::simulate::{run_scenario, ScenarioConfig};
use semipartm_core::SyntheticDataset64;

use crate::error::{data, CliError};
use crate::model_store::topic_labels;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub docs: usize,
    #[arg(long)]
    pub words: usize,
    #[arg(long)]
    pub sparsity: f64,
    /// Misspecification multiplier on the generator noise.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.25)]
    pub holdout_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub replicate: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SimulateManifest {
    command: &'static str,
    docs: usize,
    words: usize,
    sparsity: f64,
    misspec: f64,
    topics: usize,
    holdout_fraction: f64,
    seed: u64,
    replicate: u64,
    derived_seeds: DerivedSeeds,
    holdout_docs: usize,
    filter_zero_rate: f64,
    clamp_rate: f64,
    corpus_sparsity_train: f64,
}

#[derive(Serialize)]
struct DerivedSeeds {
    scenario: u64,
    auxiliary: u64,
    topic_scores: u64,
    dictionary: u64,
    corpus: u64,
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let config = ScenarioConfig {
        docs: args.docs,
        words: args.words,
        sparsity: args.sparsity,
        misspec: args.m,
        holdout_fraction: args.holdout_frac,
        seed: args.seed,
        replicate: args.replicate,
    };
    let dataset: SyntheticDataset64 = run_scenario(&config)?;
    write_dataset(&args.out, &dataset)?;
    println!(
        "simulated {} train + {} holdout documents over {} words",
        dataset.y_train.doc_count(),
        dataset.y_holdout.doc_count(),
        dataset.y_train.word_count()
    );
    Ok(())
}

pub fn write_dataset(dir: &PathBuf, dataset: &SyntheticDataset64) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| data(format!("cannot create {}: {e}", dir.display())))?;
    write_corpus_tsv(&dir.join("y_train.tsv"), &dataset.y_train)?;
    write_corpus_tsv(&dir.join("y_holdout.tsv"), &dataset.y_holdout)?;
    write_aux_tsv(&dir.join("z_train.tsv"), &dataset.z_train)?;
    write_aux_tsv(&dir.join("z_holdout.tsv"), &dataset.z_holdout)?;
    let topics = topic_labels(dataset.b_true_train.rows());
    write_matrix_tsv(
        &dir.join("b_true_train.tsv"),
        &dataset.b_true_train,
        &topics,
        &dataset.y_train.doc_ids,
        "topic",
    )?;
    write_matrix_tsv(
        &dir.join("b_true_holdout.tsv"),
        &dataset.b_true_holdout,
        &topics,
        &dataset.y_holdout.doc_ids,
        "topic",
    )?;
    write_matrix_tsv(
        &dir.join("x_true.tsv"),
        &dataset.x_true,
        &dataset.y_train.vocabulary,
        &topics,
        "word",
    )?;
    let scenario = semipartm_core::seed::derive_seed(
        dataset.config.seed,
        "scenario",
        dataset.config.replicate,
    );
    write_json(
        &dir.join("manifest.json"),
        &SimulateManifest {
            command: "simulate",
            docs: dataset.config.docs,
            words: dataset.config.words,
            sparsity: dataset.config.sparsity,
            misspec: dataset.config.misspec,
            topics: dataset.b_true_train.rows(),
            holdout_fraction: dataset.config.holdout_fraction,
            seed: dataset.config.seed,
            replicate: dataset.config.replicate,
            derived_seeds: DerivedSeeds {
                scenario,
                auxiliary: semipartm_core::seed::derive_seed(scenario, "aux", 0),
                topic_scores: semipartm_core::seed::derive_seed(scenario, "topics", 0),
                dictionary: semipartm_core::seed::derive_seed(scenario, "dict", 0),
                corpus: semipartm_core::seed::derive_seed(scenario, "corpus", 0),
            },
            holdout_docs: dataset.y_holdout.doc_count(),
            filter_zero_rate: dataset.filter_zero_rate,
            clamp_rate: dataset.clamp_rate,
            corpus_sparsity_train: semipartm_core::corpus::corpus_sparsity(&dataset.y_train),
        },
    )?;
    Ok(())
}
