//! Stage 2: additive B-spline regression of each topic's expression scores
//! on the auxiliary covariates.
//!
//! Each topic gets its own additive model: an intercept plus one term per
//! covariate. Continuous covariates enter through a B-spline basis with
//! knots at training quantiles; covariates with at most three distinct
//! values enter linearly (a spline on a binary column is singular). All
//! topics share the design matrix, so its Gram factorization is reused.

mod basis;

pub use basis::{basis_count, build_basis, quantile_knots, SplineBasisSpec};

use thiserror::Error;

use crate::numerics::{CholeskyFactor, Matrix, NumericsError};
use crate::scalar::{cast, Scalar};

/// Cutoff below which a covariate is treated as categorical-ish and fitted
/// linearly instead of through a spline basis.
const LOW_CARDINALITY: usize = 3;

#[derive(Debug, Error)]
pub enum SplineError {
    #[error("invalid knots: {0}")]
    InvalidKnots(String),
    #[error("covariate count mismatch: regressor expects {expected}, input has {got}")]
    CovariateMismatch { expected: usize, got: usize },
    #[error("topic matrix has {topic_docs} columns but auxiliary table has {aux_docs} rows")]
    DocCountMismatch { topic_docs: usize, aux_docs: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// How one covariate enters the additive model.
#[derive(Debug, Clone)]
pub enum CovariateTerm {
    /// Raw value, clamped to the training range.
    Linear { min: f64, max: f64 },
    /// B-spline basis over a clamped knot vector.
    Spline { knots: Vec<f64> },
}

impl CovariateTerm {
    pub fn width(&self, degree: usize) -> usize {
        match self {
            CovariateTerm::Linear { .. } => 1,
            CovariateTerm::Spline { knots } => basis_count(knots, degree),
        }
    }
}

/// Per-topic additive spline models mapping covariate rows to topic scores.
#[derive(Debug, Clone)]
pub struct TopicRegressor<T> {
    pub spec: SplineBasisSpec,
    pub ridge: f64,
    pub terms: Vec<CovariateTerm>,
    /// `topics x (1 + total term width)`; column 0 is the intercept.
    pub coefficients: Matrix<T>,
    /// In-sample predictions on the training table, `topics x docs`.
    pub training_fit: Matrix<T>,
}

impl<T: Scalar> TopicRegressor<T> {
    pub fn topic_count(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn covariate_count(&self) -> usize {
        self.terms.len()
    }

    pub fn design_width(&self) -> usize {
        self.coefficients.cols()
    }

    /// Intercept of topic `k`.
    pub fn intercept(&self, k: usize) -> T {
        self.coefficients.get(k, 0)
    }
}

/// Builds the shared design matrix: a column of ones followed by one block
/// per covariate.
fn design_matrix<T: Scalar>(
    z: &Matrix<T>,
    terms: &[CovariateTerm],
    spec: &SplineBasisSpec,
) -> Result<Matrix<T>, SplineError> {
    let n = z.rows();
    let width = 1 + terms.iter().map(|t| t.width(spec.degree)).sum::<usize>();
    let mut design = Matrix::zeros(n, width);
    for i in 0..n {
        design.set(i, 0, T::one());
    }
    let mut offset = 1;
    for (col, term) in terms.iter().enumerate() {
        let values = z.col_vec(col);
        match term {
            CovariateTerm::Linear { min, max } => {
                for (i, v) in values.iter().enumerate() {
                    let clamped = v.to_f64_lossy().clamp(*min, *max);
                    design.set(i, offset, cast(clamped));
                }
                offset += 1;
            }
            CovariateTerm::Spline { knots } => {
                let block = build_basis(&values, spec.degree, knots)?;
                for i in 0..n {
                    let dst = &mut design.row_mut(i)[offset..offset + block.cols()];
                    dst.copy_from_slice(block.row(i));
                }
                offset += block.cols();
            }
        }
    }
    Ok(design)
}

fn choose_terms<T: Scalar>(z: &Matrix<T>, spec: &SplineBasisSpec) -> Vec<CovariateTerm> {
    (0..z.cols())
        .map(|col| {
            let values = z.col_vec(col);
            let mut sorted: Vec<f64> = values.iter().map(|v| v.to_f64_lossy()).collect();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite covariates"));
            sorted.dedup();
            if sorted.len() <= LOW_CARDINALITY {
                CovariateTerm::Linear {
                    min: sorted[0],
                    max: sorted[sorted.len() - 1],
                }
            } else {
                CovariateTerm::Spline {
                    knots: quantile_knots(&values, spec),
                }
            }
        })
        .collect()
}

/// Fits one additive model per topic by penalized least squares on the
/// concatenated per-covariate bases plus intercept.
pub fn fit_regressors<T: Scalar>(
    b: &Matrix<T>,
    z: &Matrix<T>,
    spec: &SplineBasisSpec,
    ridge: f64,
) -> Result<TopicRegressor<T>, SplineError> {
    spec.validate()?;
    if b.cols() != z.rows() {
        return Err(SplineError::DocCountMismatch {
            topic_docs: b.cols(),
            aux_docs: z.rows(),
        });
    }
    let terms = choose_terms(z, spec);
    let design = design_matrix(z, &terms, spec)?;
    let mut gram = design.matmul_at_b(&design)?;
    if ridge > 0.0 {
        let r = cast::<T>(ridge);
        for i in 0..gram.rows() {
            let v = gram.get(i, i) + r;
            gram.set(i, i, v);
        }
    }
    let factor = CholeskyFactor::new(&gram).map_err(SplineError::Numerics)?;
    // One solve per topic against the shared factorization.
    let rhs = design.matmul_at_b(&b.transpose())?;
    let coefficients = factor.solve_columns(&rhs).transpose();

    let mut regressor = TopicRegressor {
        spec: *spec,
        ridge,
        terms,
        coefficients,
        training_fit: Matrix::zeros(b.rows(), b.cols()),
    };
    regressor.training_fit = predict_topics(&regressor, z)?;
    Ok(regressor)
}

/// Evaluates every topic's additive model at each covariate row. Inputs
/// outside the training range clamp to the boundary; negative predictions
/// floor at zero because topic scores are nonnegative by construction.
pub fn predict_topics<T: Scalar>(
    regressor: &TopicRegressor<T>,
    z_new: &Matrix<T>,
) -> Result<Matrix<T>, SplineError> {
    if z_new.cols() != regressor.terms.len() {
        return Err(SplineError::CovariateMismatch {
            expected: regressor.terms.len(),
            got: z_new.cols(),
        });
    }
    let design = design_matrix(z_new, &regressor.terms, &regressor.spec)?;
    let predictions = regressor.coefficients.matmul_a_bt(&design)?;
    Ok(predictions.map(|v| v.max(T::zero())))
}
