//! Selection of the shrinkage penalty by K-fold cross-validation.
//!
//! For each candidate penalty and fold, Stage 1 factors the training
//! columns, Stage 2 regressors are fit on the training covariates, the
//! held-out expression matrix is predicted from the held-out covariates,
//! and the candidate is scored by `||Y_test - X_train * B_test||_2^2`
//! averaged over folds. The candidate with the smallest mean error wins;
//! ties break toward the lower grid index.
//!
//! Standard orientation trains on K-1 folds and tests on one. The
//! `literal_folds` switch inverts that (train on a single fold, test on the
//! rest) for comparison runs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::run_jobs;
use crate::nmf::{nmf_fit, NmfError, NmfOptions};
use crate::numerics::{Matrix, NumericsError};
use crate::scalar::{cast, Scalar};
use crate::seed::derive_seed;
use crate::splinereg::{fit_regressors, predict_topics, SplineBasisSpec, SplineError};

/// Default candidate penalties when the caller supplies none.
pub const DEFAULT_XI_GRID: [f64; 5] = [0.0, 0.5, 1.0, 3.0, 10.0];

#[derive(Debug, Error)]
pub enum TuningError {
    #[error("candidate grid is empty")]
    GridEmpty,
    #[error("fold count {folds} invalid for {docs} documents (need 2 <= K <= D)")]
    InvalidFoldCount { folds: usize, docs: usize },
    #[error("a training split has only {train_docs} documents; need at least 2")]
    FoldTooSmall { train_docs: usize },
    #[error(transparent)]
    Nmf(#[from] NmfError),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone)]
pub struct CvOptions {
    pub nmf: NmfOptions,
    pub spline: SplineBasisSpec,
    pub ridge: f64,
    /// Train on one fold and test on the remaining K-1 folds.
    pub literal_folds: bool,
    pub jobs: usize,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self {
            nmf: NmfOptions::default(),
            spline: SplineBasisSpec::default(),
            ridge: 1e-6,
            literal_folds: false,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CvResult<T> {
    pub grid: Vec<f64>,
    /// `candidates x folds` reconstruction errors.
    pub fold_errors: Matrix<T>,
    pub mean_errors: Vec<T>,
    pub chosen_xi: f64,
    pub chosen_index: usize,
    /// Document-column indices of each fold.
    pub folds: Vec<Vec<usize>>,
}

/// Seeded random partition of `0..docs` into `k` folds whose sizes differ by
/// at most one.
pub fn make_folds(docs: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..docs).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let base = docs / k;
    let extra = docs % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        folds.push(order[start..start + size].to_vec());
        start += size;
    }
    folds
}

pub fn cross_validate_xi<T: Scalar>(
    y: &Matrix<T>,
    z: &Matrix<T>,
    topics: usize,
    grid: &[f64],
    k: usize,
    seed: u64,
    options: &CvOptions,
) -> Result<CvResult<T>, TuningError> {
    if grid.is_empty() {
        return Err(TuningError::GridEmpty);
    }
    let docs = y.cols();
    if k < 2 || k > docs {
        return Err(TuningError::InvalidFoldCount { folds: k, docs });
    }
    let folds = make_folds(docs, k, derive_seed(seed, "cv-folds", 0));

    // Precompute the train/test column split per fold.
    let mut splits = Vec::with_capacity(k);
    for fold in 0..k {
        let in_fold = &folds[fold];
        let rest: Vec<usize> = (0..k)
            .filter(|f| *f != fold)
            .flat_map(|f| folds[f].iter().copied())
            .collect();
        let (train, test) = if options.literal_folds {
            (in_fold.clone(), rest)
        } else {
            (rest, in_fold.clone())
        };
        if train.len() < 2 {
            return Err(TuningError::FoldTooSmall {
                train_docs: train.len(),
            });
        }
        splits.push((train, test));
    }

    let cell_count = grid.len() * k;
    let cells: Vec<Result<T, TuningError>> = run_jobs(options.jobs, cell_count, |idx| {
        let candidate = idx / k;
        let fold = idx % k;
        let (train, test) = &splits[fold];
        score_cell(
            y,
            z,
            topics,
            cast::<T>(grid[candidate]),
            train,
            test,
            derive_seed(seed, "cv-cell", idx as u64),
            options,
        )
    });

    let mut fold_errors = Matrix::zeros(grid.len(), k);
    for (idx, cell) in cells.into_iter().enumerate() {
        fold_errors.set(idx / k, idx % k, cell?);
    }
    let mean_errors: Vec<T> = (0..grid.len())
        .map(|c| {
            let sum = fold_errors
                .row(c)
                .iter()
                .fold(T::zero(), |acc, &e| acc + e);
            sum / cast(k as f64)
        })
        .collect();
    let chosen_index = mean_errors
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("finite errors"))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    Ok(CvResult {
        grid: grid.to_vec(),
        fold_errors,
        mean_errors,
        chosen_xi: grid[chosen_index],
        chosen_index,
        folds,
    })
}

#[allow(clippy::too_many_arguments)]
fn score_cell<T: Scalar>(
    y: &Matrix<T>,
    z: &Matrix<T>,
    topics: usize,
    xi: T,
    train: &[usize],
    test: &[usize],
    seed: u64,
    options: &CvOptions,
) -> Result<T, TuningError> {
    let y_train = y.select_columns(train);
    let y_test = y.select_columns(test);
    let z_train = z.select_rows(train);
    let z_test = z.select_rows(test);

    let mut nmf_options = options.nmf.clone();
    nmf_options.seed = seed;
    let fit = nmf_fit(&y_train, topics, xi, &nmf_options)?;
    let regressor = fit_regressors(&fit.b, &z_train, &options.spline, options.ridge)?;
    let b_test = predict_topics(&regressor, &z_test)?;
    let reconstruction = fit.x.matmul(&b_test)?;
    Ok(y_test.diff_frobenius_sq(&reconstruction)?)
}
