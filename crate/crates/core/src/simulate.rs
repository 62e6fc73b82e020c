//! Synthetic-corpus generator: auxiliary covariates drive topic scores,
//! topic scores and a sparse dictionary compose the Poisson-observed corpus.
//!
//! Generation runs backwards relative to analysis: draw the covariates,
//! derive the ten topic scores (linear, nonlinear, and cross-topic forms),
//! sparsify, clamp, then realize word counts around `X * B`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Beta, Distribution, Normal, Poisson};
use thiserror::Error;

use crate::corpus::{AuxiliaryTable, CorpusMatrix};
use crate::numerics::Matrix;
use crate::scalar::{cast, Scalar};
use crate::seed::derive_seed;

/// The generator always produces this many topics; the score formulas are
/// defined topic by topic.
pub const GENERATOR_TOPICS: usize = 10;

/// Number of auxiliary covariates the generator draws.
pub const GENERATOR_COVARIATES: usize = 5;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("auxiliary matrix must have {GENERATOR_COVARIATES} columns, got {0}")]
    WrongCovariateCount(usize),
}

/// One cell of the simulation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub docs: usize,
    pub words: usize,
    pub sparsity: f64,
    pub misspec: f64,
    pub holdout_fraction: f64,
    pub seed: u64,
    pub replicate: u64,
}

impl ScenarioConfig {
    pub const TOPICS: usize = GENERATOR_TOPICS;

    pub fn validate(&self) -> Result<(), SimulateError> {
        if self.docs == 0 || self.words == 0 {
            return Err(SimulateError::InvalidConfig(
                "docs and words must be positive".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(SimulateError::InvalidConfig(format!(
                "sparsity {} outside [0, 1]",
                self.sparsity
            )));
        }
        if self.misspec < 0.0 {
            return Err(SimulateError::InvalidConfig(format!(
                "misspecification multiplier {} must be nonnegative",
                self.misspec
            )));
        }
        if !(0.0..=1.0).contains(&self.holdout_fraction) {
            return Err(SimulateError::InvalidConfig(format!(
                "holdout fraction {} outside [0, 1]",
                self.holdout_fraction
            )));
        }
        Ok(())
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            docs: 150,
            words: 500,
            sparsity: 0.70,
            misspec: 1.0,
            holdout_fraction: 0.25,
            seed: 0,
            replicate: 0,
        }
    }
}

/// Everything a scenario run produces: ground truth and observations for the
/// training and holdout splits.
#[derive(Debug, Clone)]
pub struct SyntheticDataset<T> {
    pub config: ScenarioConfig,
    pub z_train: AuxiliaryTable<T>,
    pub z_holdout: AuxiliaryTable<T>,
    pub b_true_train: Matrix<T>,
    pub b_true_holdout: Matrix<T>,
    pub x_true: Matrix<T>,
    pub y_train: CorpusMatrix<T>,
    pub y_holdout: CorpusMatrix<T>,
    /// Fraction of topic-score cells zeroed by the sparsity filter.
    pub filter_zero_rate: f64,
    /// Fraction of topic-score cells clamped from negative to zero.
    pub clamp_rate: f64,
}

/// Draws the five auxiliary covariates, one row per document.
pub fn gen_auxiliary<T: Scalar>(docs: usize, seed: u64) -> Matrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let feedback = Poisson::new(1.0f64).expect("valid Poisson rate");
    let tenure = Normal::new(20.0f64, 7.0).expect("valid Normal params");
    let channels = Bernoulli::new(0.8).expect("valid Bernoulli p");
    let audit_a = Beta::new(6.0f64, 2.0).expect("valid Beta params");
    let audit_b = Beta::new(10.0f64, 2.0).expect("valid Beta params");
    let mut z = Matrix::zeros(docs, GENERATOR_COVARIATES);
    for i in 0..docs {
        z.set(i, 0, cast(feedback.sample(&mut rng)));
        z.set(i, 1, cast(tenure.sample(&mut rng)));
        z.set(i, 2, cast(f64::from(channels.sample(&mut rng))));
        z.set(i, 3, cast(audit_a.sample(&mut rng)));
        z.set(i, 4, cast(audit_b.sample(&mut rng)));
    }
    z
}

/// The ten topic-score formulas for one document. `eps` supplies one noise
/// draw per topic, scaled by the misspecification multiplier `m`. Scores
/// 8-10 use the noisy values of scores 3, 7, and 1.
pub fn topic_score_formulas(z: &[f64], eps: &[f64], m: f64) -> [f64; GENERATOR_TOPICS] {
    let (z1, z2, z3, z4, z5) = (z[0], z[1], z[2], z[3], z[4]);
    let mut b = [0.0f64; GENERATOR_TOPICS];
    b[0] = -1.0 + z1 + 0.2 * z2 + z3 - 0.9 * z4 - 2.0 * z5 + m * eps[0];
    b[1] = 3.0 + 1.5 * z1 + 0.15 * z2 - 5.0 * z3 - 5.0 * z5 + m * eps[1];
    b[2] = 2.0 + 0.2 * z2 - 1.4 * z1 + m * eps[2];
    b[3] = 1.6 * z1 + 8.0 * z3 - 9.0 * z4 + m * eps[3];
    b[4] = z1 * z1 / (5.0 * z5) + m * eps[4];
    b[5] = 6.0 * (z5 * z1).sin() + m * eps[5];
    b[6] = 2.0 + 3.0 * z1 * z4 - 2.0 * z3 + m * eps[6];
    b[7] = 1.0 + 10.0 * z4 - 2.0 * b[2] + m * eps[7];
    b[8] = 0.2 * z2 + 0.2 * b[6] + m * eps[8];
    b[9] = -5.0 + 0.9 * b[0] - 1.2 * b[6] + m * eps[9];
    b
}

/// Topic scores before and after the sparsity filter and nonnegativity
/// clamp.
#[derive(Debug, Clone)]
pub struct TopicScores<T> {
    /// Final `10 x D` matrix: sparsified, clamped at zero.
    pub scores: Matrix<T>,
    /// Pre-filter, pre-clamp values (noise included).
    pub raw: Matrix<T>,
    pub filter_zero_count: usize,
    pub clamp_count: usize,
}

impl<T: Scalar> TopicScores<T> {
    pub fn cell_count(&self) -> usize {
        self.scores.rows() * self.scores.cols()
    }

    pub fn filter_zero_rate(&self) -> f64 {
        self.filter_zero_count as f64 / self.cell_count() as f64
    }

    pub fn clamp_rate(&self) -> f64 {
        self.clamp_count as f64 / self.cell_count() as f64
    }
}

/// Computes the `10 x D` topic-score matrix from covariate rows: noisy
/// formula values, then each cell independently zeroed with probability
/// `sparsity`, then negatives clamped to zero.
pub fn gen_topic_scores<T: Scalar>(
    z: &Matrix<T>,
    sparsity: f64,
    misspec: f64,
    seed: u64,
) -> Result<TopicScores<T>, SimulateError> {
    if z.cols() != GENERATOR_COVARIATES {
        return Err(SimulateError::WrongCovariateCount(z.cols()));
    }
    let docs = z.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0f64, 1.0).expect("unit normal");
    let mut raw = Matrix::zeros(GENERATOR_TOPICS, docs);
    let mut scores = Matrix::zeros(GENERATOR_TOPICS, docs);
    let mut filter_zero_count = 0usize;
    let mut clamp_count = 0usize;
    for j in 0..docs {
        let z_row: Vec<f64> = z.row(j).iter().map(|v| v.to_f64_lossy()).collect();
        let mut eps = [0.0f64; GENERATOR_TOPICS];
        for e in &mut eps {
            *e = noise.sample(&mut rng);
        }
        let values = topic_score_formulas(&z_row, &eps, misspec);
        for (k, &value) in values.iter().enumerate() {
            raw.set(k, j, cast(value));
            let kept = rng.random::<f64>() >= sparsity;
            let cell = if !kept {
                filter_zero_count += 1;
                0.0
            } else if value < 0.0 {
                clamp_count += 1;
                0.0
            } else {
                value
            };
            scores.set(k, j, cast(cell));
        }
    }
    Ok(TopicScores {
        scores,
        raw,
        filter_zero_count,
        clamp_count,
    })
}

/// Sparse dictionary from a zero-inflated Poisson: each cell is zero with
/// probability `sparsity` (plus the Poisson's own negligible zero mass) and
/// otherwise `Poisson(100) / 90`.
pub fn gen_dictionary<T: Scalar>(words: usize, sparsity: f64, seed: u64) -> Matrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bulk = Poisson::new(100.0f64).expect("valid Poisson rate");
    let mut x = Matrix::zeros(words, GENERATOR_TOPICS);
    for i in 0..words {
        for k in 0..GENERATOR_TOPICS {
            if rng.random::<f64>() >= sparsity {
                x.set(i, k, cast(bulk.sample(&mut rng) / 90.0));
            }
        }
    }
    x
}

/// Realizes integer word counts: `Y_ij ~ Poisson((X B)_ij)`.
pub fn gen_corpus<T: Scalar>(
    x_true: &Matrix<T>,
    b_true: &Matrix<T>,
    seed: u64,
) -> Result<Matrix<T>, SimulateError> {
    let lambda = x_true.matmul(b_true).map_err(|e| {
        SimulateError::InvalidConfig(format!("dictionary and scores not conformable: {e}"))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = Matrix::zeros(lambda.rows(), lambda.cols());
    for i in 0..lambda.rows() {
        for j in 0..lambda.cols() {
            let rate = lambda.get(i, j).to_f64_lossy();
            if rate > 0.0 {
                let draw = Poisson::new(rate).expect("positive rate").sample(&mut rng);
                y.set(i, j, cast(draw));
            }
        }
    }
    Ok(y)
}

fn labels(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i:05}")).collect()
}

/// Runs one grid cell: generates training plus holdout documents from a
/// shared dictionary and per-replicate derived seeds.
pub fn run_scenario<T: Scalar>(config: &ScenarioConfig) -> Result<SyntheticDataset<T>, SimulateError> {
    config.validate()?;
    let base = derive_seed(config.seed, "scenario", config.replicate);
    let holdout_docs = (config.docs as f64 * config.holdout_fraction).ceil() as usize;
    let total_docs = config.docs + holdout_docs;

    let z_all = gen_auxiliary::<T>(total_docs, derive_seed(base, "aux", 0));
    let topic_scores = gen_topic_scores(
        &z_all,
        config.sparsity,
        config.misspec,
        derive_seed(base, "topics", 0),
    )?;
    let x_true = gen_dictionary::<T>(config.words, config.sparsity, derive_seed(base, "dict", 0));
    let y_all = gen_corpus(&x_true, &topic_scores.scores, derive_seed(base, "corpus", 0))?;

    let train_cols: Vec<usize> = (0..config.docs).collect();
    let holdout_cols: Vec<usize> = (config.docs..total_docs).collect();
    let vocabulary = labels("w", config.words);
    let train_ids = labels("d", config.docs);
    let holdout_ids = labels("h", holdout_docs);
    let columns: Vec<String> = (1..=GENERATOR_COVARIATES).map(|i| format!("z{i}")).collect();

    let filter_zero_rate = topic_scores.filter_zero_rate();
    let clamp_rate = topic_scores.clamp_rate();
    Ok(SyntheticDataset {
        config: config.clone(),
        z_train: AuxiliaryTable {
            doc_ids: train_ids.clone(),
            columns: columns.clone(),
            values: z_all.select_rows(&train_cols),
        },
        z_holdout: AuxiliaryTable {
            doc_ids: holdout_ids.clone(),
            columns,
            values: z_all.select_rows(&holdout_cols),
        },
        b_true_train: topic_scores.scores.select_columns(&train_cols),
        b_true_holdout: topic_scores.scores.select_columns(&holdout_cols),
        x_true,
        y_train: CorpusMatrix {
            vocabulary: vocabulary.clone(),
            doc_ids: train_ids,
            scores: y_all.select_columns(&train_cols),
        },
        y_holdout: CorpusMatrix {
            vocabulary,
            doc_ids: holdout_ids,
            scores: y_all.select_columns(&holdout_cols),
        },
        filter_zero_rate,
        clamp_rate,
    })
}
