//! `predict`: topic expressions for new inputs under a persisted model.
//!
//! The two-stage model predicts from covariates alone; the baselines fold
//! in a projected corpus.

use std::path::PathBuf;

use clap::Args;

use semipartm_core::baselines::{lda_transform, lsa_transform, plsa_transform, LdaModel, LdaOptions, LsaModel, PlsaModel, PlsaOptions};
use semipartm_core::io::{read_aux_tsv, read_corpus_tsv, write_matrix_tsv};
use semipartm_core::splinereg::predict_topics;
use semipartm_core::{Auxiliary64, Corpus64, Matrix64};

use crate::error::{data, usage, CliError};
use crate::model_store::{load_model, load_regressor, topic_labels};

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Directory written by `fit`.
    #[arg(long)]
    pub model: PathBuf,
    /// Covariate table (two-stage model input).
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// Corpus TSV on the model's vocabulary (baseline input).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &PredictArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let topics = model.metadata.topics;
    let (predicted, doc_ids): (Matrix64, Vec<String>) = match model.metadata.family.as_str() {
        "semipartm" => {
            let aux_path = args.aux.as_ref().ok_or_else(|| {
                data("model input mismatch: the semipartm model predicts from --aux covariates")
            })?;
            let aux: Auxiliary64 = read_aux_tsv(aux_path)?;
            let (regressor, _) = load_regressor(&args.model)?;
            if aux.values.cols() != regressor.covariate_count() {
                return Err(data(format!(
                    "model input mismatch: model expects {} covariates, table has {}",
                    regressor.covariate_count(),
                    aux.values.cols()
                )));
            }
            (predict_topics(&regressor, &aux.values)?, aux.doc_ids)
        }
        family => {
            if args.aux.is_some() {
                return Err(data(format!(
                    "model input mismatch: the {family} model folds in a --corpus, not covariates"
                )));
            }
            let corpus_path = args
                .corpus
                .as_ref()
                .ok_or_else(|| usage("--corpus is required for baseline models"))?;
            let corpus: Corpus64 = read_corpus_tsv(corpus_path)?;
            if corpus.vocabulary != model.vocabulary {
                return Err(data(
                    "model input mismatch: corpus vocabulary differs from the model's",
                ));
            }
            let y_new = &corpus.scores;
            let predicted = match family {
                "lsa" => {
                    let singular_values = model
                        .metadata
                        .singular_values
                        .clone()
                        .ok_or_else(|| data("lsa model metadata lacks singular values"))?;
                    let lsa = LsaModel {
                        x: model.x.clone(),
                        singular_values,
                        b: model.b.clone(),
                    };
                    lsa_transform(y_new, &lsa)?
                }
                "plsa" => {
                    let plsa = PlsaModel {
                        p_w_given_t: model.x.clone(),
                        p_t_given_d: model.b.clone(),
                        log_likelihood_trace: Vec::new(),
                    };
                    let options = PlsaOptions::default().with_seed(args.seed.unwrap_or(0));
                    plsa_transform(y_new, &plsa, &options)?
                }
                "lda" => {
                    let lda = LdaModel {
                        phi: model.x.transpose(),
                        theta: model.b.transpose(),
                        alpha: model.metadata.alpha.unwrap_or(50.0 / topics as f64),
                        beta: model.metadata.beta.unwrap_or(0.01),
                        seed: model.metadata.seed,
                    };
                    let options = LdaOptions {
                        alpha: Some(lda.alpha),
                        beta: lda.beta,
                        sweeps: model.metadata.sweeps.unwrap_or(1000),
                        burn_in: model.metadata.burn_in.unwrap_or(500),
                        sample_every: 10,
                        seed: args.seed.unwrap_or(0),
                        round_counts: false,
                    };
                    lda_transform(y_new, &lda, &options)?.transpose()
                }
                other => return Err(data(format!("unknown model family {other:?}"))),
            };
            (predicted, corpus.doc_ids)
        }
    };

    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| data(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    write_matrix_tsv(
        &args.out,
        &predicted,
        &topic_labels(topics),
        &doc_ids,
        "topic",
    )?;
    println!("predicted {} documents", doc_ids.len());
    Ok(())
}
