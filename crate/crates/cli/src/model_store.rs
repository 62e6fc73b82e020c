//! Model artifact layout: every fitted model directory holds `metadata.json`
//! plus TSV factor matrices (`x.tsv` is words x topics, `b.tsv` is topics x
//! documents). The two-stage model adds `regressor.json` and
//! `regressor_coefs.tsv` (topic x basis column).

use std::path::Path;

use serde::{Deserialize, Serialize};

use semipartm_core::io::{read_json, read_matrix_tsv, write_json, write_matrix_tsv};
use semipartm_core::splinereg::{CovariateTerm, SplineBasisSpec, TopicRegressor};
use semipartm_core::{Matrix64, TopicRegressor64};

use crate::error::{data, CliError};

#[derive(Debug, Serialize, Deserialize, Clone)]
pub struct CvSummary {
    pub grid: Vec<f64>,
    pub folds: usize,
    pub mean_errors: Vec<f64>,
    pub chosen_xi: f64,
    pub literal_folds: bool,
}

#[derive(Debug, Serialize, Deserialize, Clone)]
pub struct ModelMetadata {
    pub family: String,
    pub topics: usize,
    pub words: usize,
    pub docs: usize,
    pub seed: u64,
    pub xi: Option<f64>,
    pub iterations: Option<usize>,
    pub final_objective: Option<f64>,
    pub singular_values: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub sweeps: Option<usize>,
    pub burn_in: Option<usize>,
    pub nmf_max_iters: Option<usize>,
    pub nmf_rel_tol: Option<f64>,
    pub nmf_epsilon_floor: Option<f64>,
    pub spline_degree: Option<usize>,
    pub spline_interior_knots: Option<usize>,
    pub ridge: Option<f64>,
    pub cv: Option<CvSummary>,
    pub aux_columns: Option<Vec<String>>,
}

impl ModelMetadata {
    pub fn blank(family: &str, topics: usize, words: usize, docs: usize, seed: u64) -> Self {
        Self {
            family: family.to_string(),
            topics,
            words,
            docs,
            seed,
            xi: None,
            iterations: None,
            final_objective: None,
            singular_values: None,
            alpha: None,
            beta: None,
            sweeps: None,
            burn_in: None,
            nmf_max_iters: None,
            nmf_rel_tol: None,
            nmf_epsilon_floor: None,
            spline_degree: None,
            spline_interior_knots: None,
            ridge: None,
            cv: None,
            aux_columns: None,
        }
    }
}

pub fn topic_labels(topics: usize) -> Vec<String> {
    (1..=topics).map(|k| format!("t{k}")).collect()
}

pub fn save_factors(
    dir: &Path,
    metadata: &ModelMetadata,
    x: &Matrix64,
    vocabulary: &[String],
    b: &Matrix64,
    doc_ids: &[String],
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| data(format!("cannot create {}: {e}", dir.display())))?;
    let labels = topic_labels(metadata.topics);
    write_matrix_tsv(&dir.join("x.tsv"), x, vocabulary, &labels, "word")?;
    write_matrix_tsv(&dir.join("b.tsv"), b, &labels, doc_ids, "topic")?;
    write_json(&dir.join("metadata.json"), metadata)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TermRecord {
    Linear { min: f64, max: f64 },
    Spline { knots: Vec<f64> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RegressorRecord {
    pub degree: usize,
    pub interior_knots: usize,
    pub ridge: f64,
    pub columns: Vec<String>,
    pub terms: Vec<TermRecord>,
}

pub fn save_regressor(
    dir: &Path,
    regressor: &TopicRegressor64,
    columns: &[String],
) -> Result<(), CliError> {
    let record = RegressorRecord {
        degree: regressor.spec.degree,
        interior_knots: regressor.spec.interior_knots,
        ridge: regressor.ridge,
        columns: columns.to_vec(),
        terms: regressor
            .terms
            .iter()
            .map(|t| match t {
                CovariateTerm::Linear { min, max } => TermRecord::Linear {
                    min: *min,
                    max: *max,
                },
                CovariateTerm::Spline { knots } => TermRecord::Spline {
                    knots: knots.clone(),
                },
            })
            .collect(),
    };
    write_json(&dir.join("regressor.json"), &record)?;

    // Coefficient table: one row per topic, one column per design column.
    let mut col_labels = vec!["intercept".to_string()];
    for (i, term) in regressor.terms.iter().enumerate() {
        let name = columns
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("z{}", i + 1));
        match term {
            CovariateTerm::Linear { .. } => col_labels.push(name),
            CovariateTerm::Spline { knots } => {
                let width = semipartm_core::splinereg::basis_count(knots, regressor.spec.degree);
                for b in 1..=width {
                    col_labels.push(format!("{name}:s{b}"));
                }
            }
        }
    }
    write_matrix_tsv(
        &dir.join("regressor_coefs.tsv"),
        &regressor.coefficients,
        &topic_labels(regressor.coefficients.rows()),
        &col_labels,
        "topic",
    )?;
    Ok(())
}

pub fn load_regressor(dir: &Path) -> Result<(TopicRegressor64, Vec<String>), CliError> {
    let record: RegressorRecord = read_json(&dir.join("regressor.json"))?;
    let (coefficients, _, _) = read_matrix_tsv::<f64>(&dir.join("regressor_coefs.tsv"))?;
    let terms: Vec<CovariateTerm> = record
        .terms
        .into_iter()
        .map(|t| match t {
            TermRecord::Linear { min, max } => CovariateTerm::Linear { min, max },
            TermRecord::Spline { knots } => CovariateTerm::Spline { knots },
        })
        .collect();
    let topics = coefficients.rows();
    let docs = 0;
    Ok((
        TopicRegressor {
            spec: SplineBasisSpec {
                degree: record.degree,
                interior_knots: record.interior_knots,
            },
            ridge: record.ridge,
            terms,
            coefficients,
            training_fit: Matrix64::zeros(topics, docs),
        },
        record.columns,
    ))
}

pub struct LoadedModel {
    pub metadata: ModelMetadata,
    pub vocabulary: Vec<String>,
    pub x: Matrix64,
    pub b: Matrix64,
}

pub fn load_model(dir: &Path) -> Result<LoadedModel, CliError> {
    let metadata: ModelMetadata = read_json(&dir.join("metadata.json"))?;
    let (x, vocabulary, _) = read_matrix_tsv::<f64>(&dir.join("x.tsv"))?;
    let (b, _, _) = read_matrix_tsv::<f64>(&dir.join("b.tsv"))?;
    Ok(LoadedModel {
        metadata,
        vocabulary,
        x,
        b,
    })
}
