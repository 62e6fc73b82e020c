//! Probabilistic latent semantic analysis: EM on the aspect model
//! `P(d, w) = P(d) * sum_t P(w|t) P(t|d)`, operating on (possibly soft)
//! counts. The log-likelihood is nondecreasing across iterations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::Matrix;
use crate::scalar::{cast, Scalar};

use super::BaselineError;

#[derive(Debug, Clone)]
pub struct PlsaOptions {
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for PlsaOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            rel_tol: 1e-6,
            seed: 0,
        }
    }
}

impl PlsaOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct PlsaModel<T> {
    /// `W x T`, each column a distribution over words.
    pub p_w_given_t: Matrix<T>,
    /// `T x D`, each column a distribution over topics.
    pub p_t_given_d: Matrix<T>,
    pub log_likelihood_trace: Vec<T>,
}

struct Cell<T> {
    word: usize,
    doc: usize,
    count: T,
}

fn nonzero_cells<T: Scalar>(y: &Matrix<T>) -> Vec<Cell<T>> {
    let mut cells = Vec::new();
    for w in 0..y.rows() {
        for (d, &count) in y.row(w).iter().enumerate() {
            if count > T::zero() {
                cells.push(Cell { word: w, doc: d, count });
            }
        }
    }
    cells
}

fn random_stochastic_columns<T: Scalar>(
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> Matrix<T> {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        let mut sum = 0.0f64;
        let draws: Vec<f64> = (0..rows).map(|_| rng.random::<f64>() + 1e-3).collect();
        for &v in &draws {
            sum += v;
        }
        for (i, &v) in draws.iter().enumerate() {
            m.set(i, j, cast(v / sum));
        }
    }
    m
}

pub fn plsa_fit<T: Scalar>(
    y: &Matrix<T>,
    topics: usize,
    options: &PlsaOptions,
) -> Result<PlsaModel<T>, BaselineError> {
    let cells = nonzero_cells(y);
    if cells.is_empty() {
        return Err(BaselineError::EmptyCorpus);
    }
    let w = y.rows();
    let d = y.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut p_wt = random_stochastic_columns::<T>(w, topics, &mut rng);
    let mut p_td = random_stochastic_columns::<T>(topics, d, &mut rng);

    let doc_totals: Vec<T> = (0..d).map(|j| column_sum(y, j)).collect();
    let total = doc_totals.iter().fold(T::zero(), |a, &v| a + v);
    let log_p_d: Vec<T> = doc_totals
        .iter()
        .map(|&n| if n > T::zero() { (n / total).ln() } else { T::zero() })
        .collect();

    let mut trace = Vec::new();
    for _ in 0..options.max_iters {
        let (ll, new_wt, new_td) =
            em_sweep(&cells, &p_wt, &p_td, topics, w, d, &doc_totals, &log_p_d, None);
        p_wt = new_wt;
        p_td = new_td;
        let stop = trace
            .last()
            .is_some_and(|&prev: &T| relative_change(prev, ll) < cast(options.rel_tol));
        trace.push(ll);
        if stop {
            break;
        }
    }
    Ok(PlsaModel {
        p_w_given_t: p_wt,
        p_t_given_d: p_td,
        log_likelihood_trace: trace,
    })
}

/// Fold-in with the topic-word matrix frozen: only `P(t|d)` is re-estimated
/// for the new columns. Documents with no mass get the uniform mixture.
pub fn plsa_transform<T: Scalar>(
    y_new: &Matrix<T>,
    model: &PlsaModel<T>,
    options: &PlsaOptions,
) -> Result<Matrix<T>, BaselineError> {
    if y_new.rows() != model.p_w_given_t.rows() {
        return Err(BaselineError::Numerics(
            crate::numerics::NumericsError::DimensionMismatch {
                left_rows: y_new.rows(),
                left_cols: y_new.cols(),
                right_rows: model.p_w_given_t.rows(),
                right_cols: model.p_w_given_t.cols(),
            },
        ));
    }
    let topics = model.p_w_given_t.cols();
    let w = y_new.rows();
    let d = y_new.cols();
    let cells = nonzero_cells(y_new);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut p_td = random_stochastic_columns::<T>(topics, d, &mut rng);
    if cells.is_empty() {
        return Ok(Matrix::filled(topics, d, T::one() / cast(topics as f64)));
    }
    let doc_totals: Vec<T> = (0..d).map(|j| column_sum(y_new, j)).collect();
    let total = doc_totals.iter().fold(T::zero(), |a, &v| a + v);
    let log_p_d: Vec<T> = doc_totals
        .iter()
        .map(|&n| if n > T::zero() { (n / total).ln() } else { T::zero() })
        .collect();

    let mut previous: Option<T> = None;
    for _ in 0..options.max_iters {
        let (ll, _, new_td) = em_sweep(
            &cells,
            &model.p_w_given_t,
            &p_td,
            topics,
            w,
            d,
            &doc_totals,
            &log_p_d,
            Some(()),
        );
        p_td = new_td;
        if previous.is_some_and(|prev| relative_change(prev, ll) < cast(options.rel_tol)) {
            break;
        }
        previous = Some(ll);
    }
    Ok(p_td)
}

/// One E+M pass. Returns the log-likelihood of the parameters as they were
/// at the start of the pass. `freeze_words` keeps `P(w|t)` untouched.
#[allow(clippy::too_many_arguments)]
fn em_sweep<T: Scalar>(
    cells: &[Cell<T>],
    p_wt: &Matrix<T>,
    p_td: &Matrix<T>,
    topics: usize,
    w: usize,
    d: usize,
    doc_totals: &[T],
    log_p_d: &[T],
    freeze_words: Option<()>,
) -> (T, Matrix<T>, Matrix<T>) {
    let mut acc_wt = Matrix::<T>::zeros(w, topics);
    let mut acc_td = Matrix::<T>::zeros(topics, d);
    let mut ll = T::zero();
    let floor = T::min_positive_value();
    let mut posterior = vec![T::zero(); topics];
    for cell in cells {
        let wt_row = p_wt.row(cell.word);
        let mut denom = T::zero();
        for (t, &pw) in wt_row.iter().enumerate() {
            let q = pw * p_td.get(t, cell.doc);
            posterior[t] = q;
            denom = denom + q;
        }
        ll = ll + cell.count * (denom.max(floor).ln() + log_p_d[cell.doc]);
        let denom = denom.max(floor);
        let acc_row = acc_wt.row_mut(cell.word);
        for (t, q) in posterior.iter().enumerate() {
            let share = cell.count * *q / denom;
            acc_row[t] = acc_row[t] + share;
            let v = acc_td.get(t, cell.doc) + share;
            acc_td.set(t, cell.doc, v);
        }
    }

    let new_wt = if freeze_words.is_some() {
        p_wt.clone()
    } else {
        let mut m = acc_wt;
        for t in 0..topics {
            let col_sum = (0..w).fold(T::zero(), |a, i| a + m.get(i, t));
            if col_sum > T::zero() {
                for i in 0..w {
                    let v = m.get(i, t) / col_sum;
                    m.set(i, t, v);
                }
            } else {
                let uniform = T::one() / cast(w as f64);
                for i in 0..w {
                    m.set(i, t, uniform);
                }
            }
        }
        m
    };

    let mut new_td = acc_td;
    for j in 0..d {
        if doc_totals[j] > T::zero() {
            for t in 0..topics {
                let v = new_td.get(t, j) / doc_totals[j];
                new_td.set(t, j, v);
            }
        } else {
            let uniform = T::one() / cast(topics as f64);
            for t in 0..topics {
                new_td.set(t, j, uniform);
            }
        }
    }
    (ll, new_wt, new_td)
}

fn column_sum<T: Scalar>(m: &Matrix<T>, col: usize) -> T {
    (0..m.rows()).fold(T::zero(), |acc, i| acc + m.get(i, col))
}

fn relative_change<T: Scalar>(prev: T, next: T) -> T {
    (next - prev).abs() / prev.abs().max(T::min_positive_value())
}
