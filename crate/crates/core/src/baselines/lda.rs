//! Latent Dirichlet allocation via collapsed Gibbs sampling.
//!
//! Integer counts are expanded into token lists; topic assignments are
//! resampled from the collapsed conditional, and smoothed point estimates of
//! `phi` and `theta` are averaged over post-burn-in samples. Runs are
//! deterministic given the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::Matrix;
use crate::scalar::{cast, Scalar};

use super::BaselineError;

#[derive(Debug, Clone)]
pub struct LdaOptions {
    /// Dirichlet prior on document-topic mixtures; `None` means `50 / T`.
    pub alpha: Option<f64>,
    /// Dirichlet prior on topic-word distributions.
    pub beta: f64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub sample_every: usize,
    pub seed: u64,
    /// Round near-integer counts instead of rejecting them.
    pub round_counts: bool,
}

impl Default for LdaOptions {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: 0.01,
            sweeps: 1000,
            burn_in: 500,
            sample_every: 10,
            seed: 0,
            round_counts: false,
        }
    }
}

impl LdaOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn resolved_alpha(&self, topics: usize) -> f64 {
        self.alpha.unwrap_or(50.0 / topics as f64)
    }
}

#[derive(Debug, Clone)]
pub struct LdaModel<T> {
    /// Topic-word distributions, `T x W`, rows sum to one.
    pub phi: Matrix<T>,
    /// Document-topic distributions, `D x T`, rows sum to one.
    pub theta: Matrix<T>,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

/// Expands the count matrix into per-document token lists. Counts must be
/// nonnegative integers (within 1e-9) unless rounding is enabled.
fn token_lists<T: Scalar>(y: &Matrix<T>, round_counts: bool) -> Result<Vec<Vec<u32>>, BaselineError> {
    let mut docs = vec![Vec::new(); y.cols()];
    for w in 0..y.rows() {
        for (d, &value) in y.row(w).iter().enumerate() {
            let v = value.to_f64_lossy();
            let rounded = v.round();
            if rounded < 0.0 || (!round_counts && (v - rounded).abs() > 1e-9) {
                return Err(BaselineError::NonIntegerCounts {
                    row: w,
                    col: d,
                    value: v,
                });
            }
            for _ in 0..rounded as u64 {
                docs[d].push(w as u32);
            }
        }
    }
    Ok(docs)
}

struct GibbsState {
    assignments: Vec<Vec<u32>>,
    doc_topic: Vec<Vec<f64>>,
    topic_word: Vec<Vec<f64>>,
    topic_total: Vec<f64>,
}

impl GibbsState {
    fn init(docs: &[Vec<u32>], topics: usize, words: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut state = Self {
            assignments: docs.iter().map(|d| vec![0u32; d.len()]).collect(),
            doc_topic: vec![vec![0.0; topics]; docs.len()],
            topic_word: vec![vec![0.0; words]; topics],
            topic_total: vec![0.0; topics],
        };
        for (d, tokens) in docs.iter().enumerate() {
            for (i, &w) in tokens.iter().enumerate() {
                let k = (rng.random::<u64>() % topics as u64) as usize;
                state.assignments[d][i] = k as u32;
                state.doc_topic[d][k] += 1.0;
                state.topic_word[k][w as usize] += 1.0;
                state.topic_total[k] += 1.0;
            }
        }
        state
    }
}

fn sample_topic(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return k;
        }
    }
    weights.len() - 1
}

pub fn lda_fit<T: Scalar>(
    y: &Matrix<T>,
    topics: usize,
    options: &LdaOptions,
) -> Result<LdaModel<T>, BaselineError> {
    let words = y.rows();
    let docs = token_lists(y, options.round_counts)?;
    let alpha = options.resolved_alpha(topics);
    let beta = options.beta;
    let w_beta = words as f64 * beta;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut state = GibbsState::init(&docs, topics, words, &mut rng);

    let mut phi_acc = vec![vec![0.0f64; words]; topics];
    let mut theta_acc = vec![vec![0.0f64; topics]; docs.len()];
    let mut samples = 0usize;
    let mut weights = vec![0.0f64; topics];

    for sweep in 0..options.sweeps {
        for (d, tokens) in docs.iter().enumerate() {
            for (i, &word) in tokens.iter().enumerate() {
                let w = word as usize;
                let old = state.assignments[d][i] as usize;
                state.doc_topic[d][old] -= 1.0;
                state.topic_word[old][w] -= 1.0;
                state.topic_total[old] -= 1.0;
                for k in 0..topics {
                    weights[k] = (state.doc_topic[d][k] + alpha)
                        * (state.topic_word[k][w] + beta)
                        / (state.topic_total[k] + w_beta);
                }
                let new = sample_topic(&weights, &mut rng);
                state.assignments[d][i] = new as u32;
                state.doc_topic[d][new] += 1.0;
                state.topic_word[new][w] += 1.0;
                state.topic_total[new] += 1.0;
            }
        }
        let past_burn_in = sweep + 1 > options.burn_in;
        let on_schedule = options.sample_every == 0
            || (sweep + 1 - options.burn_in.min(sweep + 1)) % options.sample_every.max(1) == 0;
        if past_burn_in && on_schedule {
            accumulate(&state, alpha, beta, w_beta, &docs, &mut phi_acc, &mut theta_acc);
            samples += 1;
        }
    }
    if samples == 0 {
        accumulate(&state, alpha, beta, w_beta, &docs, &mut phi_acc, &mut theta_acc);
        samples = 1;
    }

    Ok(LdaModel {
        phi: average_rows(&phi_acc, samples),
        theta: average_rows(&theta_acc, samples),
        alpha,
        beta,
        seed: options.seed,
    })
}

fn accumulate(
    state: &GibbsState,
    alpha: f64,
    beta: f64,
    w_beta: f64,
    docs: &[Vec<u32>],
    phi_acc: &mut [Vec<f64>],
    theta_acc: &mut [Vec<f64>],
) {
    let topics = state.topic_total.len();
    for (k, row) in phi_acc.iter_mut().enumerate() {
        let denom = state.topic_total[k] + w_beta;
        for (w, cell) in row.iter_mut().enumerate() {
            *cell += (state.topic_word[k][w] + beta) / denom;
        }
    }
    let t_alpha = topics as f64 * alpha;
    for (d, row) in theta_acc.iter_mut().enumerate() {
        let denom = docs[d].len() as f64 + t_alpha;
        for (k, cell) in row.iter_mut().enumerate() {
            *cell += (state.doc_topic[d][k] + alpha) / denom;
        }
    }
}

fn average_rows<T: Scalar>(acc: &[Vec<f64>], samples: usize) -> Matrix<T> {
    let rows = acc.len();
    let cols = acc.first().map_or(0, Vec::len);
    let mut out = Matrix::zeros(rows, cols);
    for (i, row) in acc.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out.set(i, j, cast(v / samples as f64));
        }
    }
    out
}

/// Fold-in for unseen documents: `phi` is frozen, per-document assignments
/// are Gibbs-sampled, and post-burn-in `theta` rows are averaged. Empty
/// documents come back as the prior mean (uniform).
pub fn lda_transform<T: Scalar>(
    y_new: &Matrix<T>,
    model: &LdaModel<T>,
    options: &LdaOptions,
) -> Result<Matrix<T>, BaselineError> {
    let words = model.phi.cols();
    if y_new.rows() != words {
        return Err(BaselineError::Numerics(
            crate::numerics::NumericsError::DimensionMismatch {
                left_rows: y_new.rows(),
                left_cols: y_new.cols(),
                right_rows: words,
                right_cols: model.phi.rows(),
            },
        ));
    }
    let topics = model.phi.rows();
    let docs = token_lists(y_new, options.round_counts)?;
    let alpha = model.alpha;
    let t_alpha = topics as f64 * alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut theta = Matrix::zeros(docs.len(), topics);
    let mut weights = vec![0.0f64; topics];

    for (d, tokens) in docs.iter().enumerate() {
        if tokens.is_empty() {
            for k in 0..topics {
                theta.set(d, k, cast(1.0 / topics as f64));
            }
            continue;
        }
        let mut assignments = vec![0u32; tokens.len()];
        let mut counts = vec![0.0f64; topics];
        for (i, _) in tokens.iter().enumerate() {
            let k = (rng.random::<u64>() % topics as u64) as usize;
            assignments[i] = k as u32;
            counts[k] += 1.0;
        }
        let mut acc = vec![0.0f64; topics];
        let mut samples = 0usize;
        for sweep in 0..options.sweeps {
            for (i, &word) in tokens.iter().enumerate() {
                let w = word as usize;
                let old = assignments[i] as usize;
                counts[old] -= 1.0;
                for k in 0..topics {
                    weights[k] =
                        (counts[k] + alpha) * model.phi.get(k, w).to_f64_lossy();
                }
                let new = sample_topic(&weights, &mut rng);
                assignments[i] = new as u32;
                counts[new] += 1.0;
            }
            let past_burn_in = sweep + 1 > options.burn_in;
            let on_schedule =
                (sweep + 1 - options.burn_in.min(sweep + 1)) % options.sample_every.max(1) == 0;
            if past_burn_in && on_schedule {
                let denom = tokens.len() as f64 + t_alpha;
                for k in 0..topics {
                    acc[k] += (counts[k] + alpha) / denom;
                }
                samples += 1;
            }
        }
        if samples == 0 {
            let denom = tokens.len() as f64 + t_alpha;
            for k in 0..topics {
                acc[k] += (counts[k] + alpha) / denom;
            }
            samples = 1;
        }
        for k in 0..topics {
            theta.set(d, k, cast(acc[k] / samples as f64));
        }
    }
    Ok(theta)
}
