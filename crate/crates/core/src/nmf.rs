//! Stage 1: L1-penalized nonnegative factorization `Y ~ X * B` via
//! multiplicative updates.
//!
//! The objective is `||Y - XB||_2^2 + xi * (||X||_1 + ||B||_1)` with a single
//! shrinkage penalty shared by both factors. Updates rescale entries by
//! nonnegative ratios, so nonnegativity is preserved; a small floor keeps
//! entries alive because an exact zero is absorbing under multiplicative
//! updates.

use thiserror::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{truncated_svd, Matrix, NumericsError};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum NmfError {
    #[error("input matrix has a negative entry at ({row}, {col})")]
    NonNegativityViolated { row: usize, col: usize },
    #[error("rank {rank} outside valid range 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("objective became non-finite at iteration {iteration}")]
    NumericalFailure { iteration: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// How `nmf_fit` builds its starting factors.
///
/// The SVD-seeded start is the default: on sparse corpora the leading
/// singular directions already separate the topic blobs, while a random
/// start must escape the all-floor basin that the L1 penalty creates (the
/// multiplicative ratio stays below one once entries fall past the penalty
/// scale, so that basin is absorbing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmfInit {
    /// Nonnegative double SVD: sign-split singular pairs, zeros filled with
    /// `mean(Y) / 100`. Deterministic.
    Nndsvd,
    /// Seeded i.i.d. uniform(0, 1] entries.
    RandomUniform,
}

#[derive(Debug, Clone)]
pub struct NmfOptions {
    pub max_iters: usize,
    /// Relative objective change below which iteration stops.
    pub rel_tol: f64,
    pub seed: u64,
    /// Strictly positive floor applied to every iterate entry.
    pub epsilon_floor: f64,
    pub init: NmfInit,
}

impl Default for NmfOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            rel_tol: 1e-6,
            seed: 0,
            epsilon_floor: 1e-12,
            init: NmfInit::Nndsvd,
        }
    }
}

impl NmfOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Result of a factorization run.
#[derive(Debug, Clone)]
pub struct Factorization<T> {
    /// Dictionary, `W x T`, nonnegative.
    pub x: Matrix<T>,
    /// Topic distribution, `T x D`, nonnegative.
    pub b: Matrix<T>,
    pub xi: T,
    /// Objective value at initialization and after every step.
    pub objective_trace: Vec<T>,
    pub iterations_run: usize,
}

/// `||Y - XB||_2^2 + xi * (||X||_1 + ||B||_1)`.
pub fn nmf_objective<T: Scalar>(
    y: &Matrix<T>,
    x: &Matrix<T>,
    b: &Matrix<T>,
    xi: T,
) -> Result<T, NmfError> {
    let xb = x.matmul(b)?;
    let recon = y.diff_frobenius_sq(&xb)?;
    Ok(recon + xi * (x.l1_norm() + b.l1_norm()))
}

/// One multiplicative update of both factors. `B` is updated with the fresh
/// `X`, which is what makes the combined step monotone for the penalized
/// objective.
pub fn nmf_step<T: Scalar>(
    y: &Matrix<T>,
    x: &Matrix<T>,
    b: &Matrix<T>,
    xi: T,
    epsilon_floor: T,
) -> Result<(Matrix<T>, Matrix<T>), NmfError> {
    let x_new = update_dictionary(y, x, b, xi, epsilon_floor)?;
    let b_new = update_expression(y, &x_new, b, xi, epsilon_floor)?;
    Ok((x_new, b_new))
}

/// `X_ik <- X_ik * (Y B^T)_ik / ((X B B^T)_ik + xi)`, floored.
fn update_dictionary<T: Scalar>(
    y: &Matrix<T>,
    x: &Matrix<T>,
    b: &Matrix<T>,
    xi: T,
    floor: T,
) -> Result<Matrix<T>, NmfError> {
    let numer = y.matmul_a_bt(b)?;
    let bbt = b.matmul_a_bt(b)?;
    let denom = x.matmul(&bbt)?;
    Ok(multiplicative_update(x, &numer, &denom, xi, floor))
}

/// `B_kj <- B_kj * (X^T Y)_kj / ((X^T X B)_kj + xi)`, floored.
fn update_expression<T: Scalar>(
    y: &Matrix<T>,
    x: &Matrix<T>,
    b: &Matrix<T>,
    xi: T,
    floor: T,
) -> Result<Matrix<T>, NmfError> {
    let numer = x.matmul_at_b(y)?;
    let xtx = x.matmul_at_b(x)?;
    let denom = xtx.matmul(b)?;
    Ok(multiplicative_update(b, &numer, &denom, xi, floor))
}

fn multiplicative_update<T: Scalar>(
    base: &Matrix<T>,
    numer: &Matrix<T>,
    denom: &Matrix<T>,
    xi: T,
    floor: T,
) -> Matrix<T> {
    let mut out = base.clone();
    for ((o, &n), &d) in out
        .data_mut()
        .iter_mut()
        .zip(numer.iter())
        .zip(denom.iter())
    {
        *o = (*o * n / (d + xi)).max(floor);
    }
    out
}

/// Uniform(0, 1] entries from a seeded generator, scaled by `scale`.
fn random_positive_matrix<T: Scalar>(
    rows: usize,
    cols: usize,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Matrix<T> {
    let mut m = Matrix::zeros(rows, cols);
    for v in m.data_mut() {
        *v = cast((1.0 - rng.random::<f64>()) * scale);
    }
    m
}

/// Nonnegative double-SVD start (NNDSVD with mean fill): each singular pair
/// contributes whichever sign section carries more mass; zero and negative
/// cells are filled with `mean(Y) / 100` so the multiplicative updates can
/// still grow them.
fn nndsvd_init<T: Scalar>(
    y: &Matrix<T>,
    t: usize,
    floor: T,
) -> Result<(Matrix<T>, Matrix<T>), NmfError> {
    let svd = truncated_svd(y, t)?;
    let cells = (y.rows() * y.cols()).max(1) as f64;
    let mean = y.iter().fold(0.0, |acc, v| acc + v.to_f64_lossy()) / cells;
    let fill = cast::<T>((mean / 100.0).max(0.0)).max(floor);

    let mut x = Matrix::filled(y.rows(), t, fill);
    let mut b = Matrix::filled(t, y.cols(), fill);
    for k in 0..t {
        let s = svd.singular_values[k];
        if s <= T::zero() {
            continue;
        }
        let u: Vec<T> = (0..y.rows()).map(|i| svd.u.get(i, k)).collect();
        let v: Vec<T> = svd.vt.row(k).to_vec();
        let (u_sec, v_sec, weight) = if k == 0 {
            // The leading pair is nonnegative up to sign for nonnegative Y.
            let u_abs: Vec<T> = u.iter().map(|a| a.abs()).collect();
            let v_abs: Vec<T> = v.iter().map(|a| a.abs()).collect();
            (u_abs, v_abs, T::one())
        } else {
            let up: Vec<T> = u.iter().map(|&a| a.max(T::zero())).collect();
            let un: Vec<T> = u.iter().map(|&a| (-a).max(T::zero())).collect();
            let vp: Vec<T> = v.iter().map(|&a| a.max(T::zero())).collect();
            let vn: Vec<T> = v.iter().map(|&a| (-a).max(T::zero())).collect();
            let norm = |s: &[T]| s.iter().fold(T::zero(), |acc, &a| acc + a * a).sqrt();
            let (n_up, n_vp, n_un, n_vn) = (norm(&up), norm(&un), norm(&vp), norm(&vn));
            if n_up * n_vp >= n_un * n_vn {
                let w = n_up * n_vp;
                (normalized(up, n_up), normalized(vp, n_vp), w)
            } else {
                let w = n_un * n_vn;
                (normalized(un, n_un), normalized(vn, n_vn), w)
            }
        };
        let scale = (s * weight).sqrt();
        for (i, &value) in u_sec.iter().enumerate() {
            let v = (scale * value).max(fill);
            x.set(i, k, v);
        }
        for (j, &value) in v_sec.iter().enumerate() {
            let v = (scale * value).max(fill);
            b.set(k, j, v);
        }
    }
    Ok((x, b))
}

fn normalized<T: Scalar>(mut values: Vec<T>, norm: T) -> Vec<T> {
    if norm > T::zero() {
        for v in &mut values {
            *v = *v / norm;
        }
    }
    values
}

/// Factors `Y` at rank `t` with penalty `xi`, iterating until the relative
/// objective change drops below `rel_tol` or `max_iters` is reached.
/// Deterministic given the seed in `options`.
pub fn nmf_fit<T: Scalar>(
    y: &Matrix<T>,
    t: usize,
    xi: T,
    options: &NmfOptions,
) -> Result<Factorization<T>, NmfError> {
    check_nonnegative(y)?;
    let max_rank = y.rows().min(y.cols());
    if t < 1 || t > max_rank {
        return Err(NmfError::InvalidRank { rank: t, max: max_rank });
    }
    let floor = cast::<T>(options.epsilon_floor);
    let (mut x, mut b) = match options.init {
        NmfInit::Nndsvd => nndsvd_init(y, t, floor)?,
        NmfInit::RandomUniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            (
                random_positive_matrix::<T>(y.rows(), t, 1.0, &mut rng),
                random_positive_matrix::<T>(t, y.cols(), 1.0, &mut rng),
            )
        }
    };
    let rel_tol = cast::<T>(options.rel_tol);

    let mut trace = Vec::with_capacity(options.max_iters + 1);
    let mut objective = nmf_objective(y, &x, &b, xi)?;
    trace.push(objective);
    let mut iterations = 0;
    for iter in 0..options.max_iters {
        let (x_new, b_new) = nmf_step(y, &x, &b, xi, floor)?;
        let next = nmf_objective(y, &x_new, &b_new, xi)?;
        if !next.is_finite() {
            return Err(NmfError::NumericalFailure { iteration: iter });
        }
        let scale = objective.abs().max(T::min_positive_value());
        // With a positive penalty the ratio updates eventually overshrink
        // relative to the stated objective; once a step stops improving it,
        // the previous iterate is the one to keep.
        let improving = next <= objective * (T::one() + cast(1e-12));
        if improving {
            x = x_new;
            b = b_new;
        }
        let stalled = !improving || (objective - next).abs() / scale < rel_tol;
        // The floor is absorbing: a topic whose entries fall to it can never
        // climb back through the penalized ratio, so on a sparse corpus part
        // of the rank can idle while residual mass goes unexplained. Seeding
        // an idle topic onto the largest residual cell is accepted only when
        // it provably lowers the objective, so the trace stays monotone.
        let rescued = (stalled || (iter + 1) % RESCUE_PERIOD == 0)
            && rescue_idle_topic(y, &mut x, &mut b, xi, floor)?;
        if !improving && !rescued {
            break;
        }
        let current = if rescued {
            nmf_objective(y, &x, &b, xi)?
        } else {
            next
        };
        trace.push(current);
        iterations = iter + 1;
        objective = current;
        if stalled && !rescued {
            break;
        }
    }
    Ok(Factorization {
        x,
        b,
        xi,
        objective_trace: trace,
        iterations_run: iterations,
    })
}

const RESCUE_PERIOD: usize = 25;

/// Reseeds one idle topic onto the largest positive residual cell when the
/// seed strictly lowers the penalized objective. Seeding `sqrt(r)` into both
/// factors changes the objective by `2 xi sqrt(r) - r^2`, so only residuals
/// above `(2 xi)^(2/3)` qualify; with `xi = 0` any positive residual does.
fn rescue_idle_topic<T: Scalar>(
    y: &Matrix<T>,
    x: &mut Matrix<T>,
    b: &mut Matrix<T>,
    xi: T,
    floor: T,
) -> Result<bool, NmfError> {
    let topics = x.cols();
    let idle_threshold = floor * cast(10.0);
    let idle = (0..topics).find(|&k| {
        let x_max = (0..x.rows()).fold(T::zero(), |acc, i| acc.max(x.get(i, k)));
        let b_max = b.row(k).iter().fold(T::zero(), |acc, &v| acc.max(v));
        x_max <= idle_threshold || b_max <= idle_threshold
    });
    let Some(k) = idle else {
        return Ok(false);
    };

    let reconstruction = x.matmul(b)?;
    let mut best = T::zero();
    let mut best_cell = (0usize, 0usize);
    for i in 0..y.rows() {
        let y_row = y.row(i);
        let r_row = reconstruction.row(i);
        for (j, (&yv, &rv)) in y_row.iter().zip(r_row).enumerate() {
            let residual = yv - rv;
            if residual > best {
                best = residual;
                best_cell = (i, j);
            }
        }
    }
    // Strict improvement requirement, with margin for the floor cross terms.
    let two = cast::<T>(2.0);
    let gain = best * best - two * xi * best.sqrt();
    if best <= T::zero() || gain <= cast(1e-9) {
        return Ok(false);
    }
    let seed = best.sqrt();
    let (i, j) = best_cell;
    for row in 0..x.rows() {
        x.set(row, k, floor);
    }
    for col in 0..b.cols() {
        b.set(k, col, floor);
    }
    x.set(i, k, seed);
    b.set(k, j, seed);
    Ok(true)
}

/// Fold-in: solves for the expression of new columns under a frozen
/// dictionary by iterating only the `B` update.
pub fn nmf_transform<T: Scalar>(
    y_new: &Matrix<T>,
    x_fixed: &Matrix<T>,
    xi: T,
    options: &NmfOptions,
) -> Result<Matrix<T>, NmfError> {
    check_nonnegative(y_new)?;
    if y_new.rows() != x_fixed.rows() {
        return Err(NmfError::Numerics(NumericsError::DimensionMismatch {
            left_rows: y_new.rows(),
            left_cols: y_new.cols(),
            right_rows: x_fixed.rows(),
            right_cols: x_fixed.cols(),
        }));
    }
    let t = x_fixed.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut b = random_positive_matrix::<T>(t, y_new.cols(), 1.0, &mut rng);
    let floor = cast::<T>(options.epsilon_floor);
    let rel_tol = cast::<T>(options.rel_tol);

    // Restricted objective: reconstruction plus the B penalty term.
    let objective_of = |b: &Matrix<T>| -> Result<T, NmfError> {
        let xb = x_fixed.matmul(b)?;
        Ok(y_new.diff_frobenius_sq(&xb)? + xi * b.l1_norm())
    };
    let mut objective = objective_of(&b)?;
    for iter in 0..options.max_iters {
        let b_new = update_expression(y_new, x_fixed, &b, xi, floor)?;
        let next = objective_of(&b_new)?;
        if !next.is_finite() {
            return Err(NmfError::NumericalFailure { iteration: iter });
        }
        if next > objective * (T::one() + cast(1e-12)) {
            break;
        }
        b = b_new;
        let scale = objective.abs().max(T::min_positive_value());
        if (objective - next).abs() / scale < rel_tol {
            break;
        }
        objective = next;
    }
    Ok(b)
}

fn check_nonnegative<T: Scalar>(y: &Matrix<T>) -> Result<(), NmfError> {
    for i in 0..y.rows() {
        if let Some(j) = y.row(i).iter().position(|v| *v < T::zero()) {
            return Err(NmfError::NonNegativityViolated { row: i, col: j });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[f64]) -> Matrix<f64> {
        Matrix::from_vec(rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn objective_zero_at_exact_factorization() {
        let x = m(2, 1, &[1.0, 2.0]);
        let b = m(1, 2, &[3.0, 4.0]);
        let y = x.matmul(&b).unwrap();
        let obj = nmf_objective(&y, &x, &b, 0.0).unwrap();
        assert!(obj.abs() < 1e-15);
    }

    #[test]
    fn objective_hand_arithmetic() {
        let y = m(1, 1, &[1.0]);
        let x = m(1, 1, &[1.0]);
        let b = m(1, 1, &[1.0]);
        assert!((nmf_objective(&y, &x, &b, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let y2 = m(1, 1, &[2.0]);
        assert!((nmf_objective(&y2, &x, &b, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn step_hand_arithmetic_on_scalar_case() {
        // Y=2, X=1, B=1, xi=0: X' = 1 * 2/1 = 2.
        let y = m(1, 1, &[2.0]);
        let x = m(1, 1, &[1.0]);
        let b = m(1, 1, &[1.0]);
        let (x_new, _) = nmf_step(&y, &x, &b, 0.0, 1e-12).unwrap();
        assert!((x_new.get(0, 0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_factorization_is_a_fixed_point() {
        let x = m(3, 2, &[1.0, 0.5, 2.0, 1.0, 0.3, 0.7]);
        let b = m(2, 2, &[1.0, 2.0, 3.0, 0.5]);
        let y = x.matmul(&b).unwrap();
        let (x_new, b_new) = nmf_step(&y, &x, &b, 0.0, 1e-300).unwrap();
        assert!(x.max_abs_diff(&x_new).unwrap() < 1e-12);
        assert!(b.max_abs_diff(&b_new).unwrap() < 1e-12);
    }

    #[test]
    fn step_never_increases_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let y = random_positive_matrix::<f64>(4, 5, 1.0, &mut rng).scaled(3.0);
        let x = random_positive_matrix::<f64>(4, 3, 1.0, &mut rng);
        let b = random_positive_matrix::<f64>(3, 5, 1.0, &mut rng);
        for &xi in &[0.0, 1.0, 3.0] {
            let before = nmf_objective(&y, &x, &b, xi).unwrap();
            let (x2, b2) = nmf_step(&y, &x, &b, xi, 1e-12).unwrap();
            let after = nmf_objective(&y, &x2, &b2, xi).unwrap();
            assert!(after <= before * (1.0 + 1e-8), "xi={xi}: {before} -> {after}");
        }
    }

    #[test]
    fn zero_matrix_converges_to_floor() {
        let y = Matrix::<f64>::zeros(3, 2);
        let fit = nmf_fit(&y, 1, 0.5, &NmfOptions::default().with_seed(3)).unwrap();
        assert!(fit.x.iter().all(|&v| v <= 1e-6));
        assert!(fit.b.iter().all(|&v| v >= 1e-12));
    }

    #[test]
    fn rank_one_positive_is_recovered() {
        let u = m(5, 1, &[1.0, 2.0, 0.5, 1.5, 3.0]);
        let v = m(1, 4, &[2.0, 1.0, 0.25, 0.75]);
        let y = u.matmul(&v).unwrap();
        let fit = nmf_fit(&y, 1, 0.0, &NmfOptions::default().with_seed(11)).unwrap();
        let recon = fit.x.matmul(&fit.b).unwrap();
        let err = y.diff_frobenius_sq(&recon).unwrap();
        assert!(err <= 1e-6 * y.frobenius_sq(), "relative error {err}");
    }

    #[test]
    fn trace_is_monotone_and_entries_floored() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let y = random_positive_matrix::<f64>(12, 9, 1.0, &mut rng).scaled(4.0);
        let fit = nmf_fit(&y, 3, 1.0, &NmfOptions::default().with_seed(5)).unwrap();
        for w in fit.objective_trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-8));
        }
        assert!(fit.x.iter().all(|&v| v >= 1e-12));
        assert!(fit.b.iter().all(|&v| v >= 1e-12));
    }

    #[test]
    fn negative_input_is_rejected() {
        let y = m(1, 2, &[1.0, -0.5]);
        assert!(matches!(
            nmf_fit(&y, 1, 0.0, &NmfOptions::default()),
            Err(NmfError::NonNegativityViolated { row: 0, col: 1 })
        ));
    }

    #[test]
    fn fits_are_deterministic_under_a_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let y = random_positive_matrix::<f64>(8, 6, 1.0, &mut rng);
        let opts = NmfOptions::default().with_seed(17);
        let a = nmf_fit(&y, 2, 1.0, &opts).unwrap();
        let b = nmf_fit(&y, 2, 1.0, &opts).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.b, b.b);
        assert_eq!(a.objective_trace, b.objective_trace);
    }

    #[test]
    fn transform_scalar_fixed_point() {
        // Y=4, X=2, xi=0: B update is B * 8 / (4B) -> 2 in one step.
        let y = m(1, 1, &[4.0]);
        let x = m(1, 1, &[2.0]);
        let b = nmf_transform(&y, &x, 0.0, &NmfOptions::default().with_seed(1)).unwrap();
        assert!((b.get(0, 0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn transform_of_zero_columns_sits_at_floor() {
        let y = Matrix::<f64>::zeros(3, 2);
        let x = m(3, 2, &[1.0, 0.2, 0.5, 1.0, 0.1, 0.4]);
        let b = nmf_transform(&y, &x, 0.0, &NmfOptions::default().with_seed(1)).unwrap();
        assert!(b.iter().all(|&v| v <= 1e-6));
    }

    #[test]
    fn transform_reproduces_training_column() {
        // Block-structured dictionary and interior expressions keep the
        // fitted column away from the boundary, where multiplicative
        // updates converge too slowly to compare tightly.
        let x_true = m(6, 2, &[2.0, 0.1, 1.5, 0.2, 1.8, 0.1, 0.1, 2.2, 0.2, 1.6, 0.1, 1.9]);
        let b_true = m(2, 4, &[1.2, 0.8, 2.0, 1.5, 0.9, 1.7, 0.7, 1.1]);
        let y = x_true.matmul(&b_true).unwrap();
        let opts = NmfOptions {
            max_iters: 20_000,
            rel_tol: 1e-15,
            seed: 7,
            ..NmfOptions::default()
        };
        // Unpenalized, the fold-in problem is convex with a unique optimum,
        // so the refolded column matches the training column tightly.
        let fit = nmf_fit(&y, 2, 0.0, &opts).unwrap();
        let first_col = y.select_columns(&[0]);
        let refolded = nmf_transform(&first_col, &fit.x, 0.0, &opts).unwrap();
        let trained = fit.b.select_columns(&[0]);
        let diff = refolded.max_abs_diff(&trained).unwrap();
        let scale = trained.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
        assert!(diff / scale < 1e-4, "relative diff {}", diff / scale);

        // Under a penalty the two runs stop at slightly different points of
        // the same shrinkage path; they still agree closely.
        let fit = nmf_fit(&y, 2, 1.0, &opts).unwrap();
        let refolded = nmf_transform(&first_col, &fit.x, 1.0, &opts).unwrap();
        let trained = fit.b.select_columns(&[0]);
        let diff = refolded.max_abs_diff(&trained).unwrap();
        let scale = trained.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
        assert!(diff / scale < 5e-2, "penalized relative diff {}", diff / scale);
    }

    #[test]
    fn higher_penalty_means_more_near_zero_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let y = random_positive_matrix::<f64>(50, 30, 1.0, &mut rng).scaled(2.0);
        let opts = NmfOptions::default().with_seed(13);
        let mut near_zero_counts = Vec::new();
        for &xi in &[0.0, 1.0, 10.0] {
            let fit = nmf_fit(&y, 5, xi, &opts).unwrap();
            let threshold = 10.0 * opts.epsilon_floor;
            let count = fit.x.iter().filter(|v| **v <= threshold).count()
                + fit.b.iter().filter(|v| **v <= threshold).count();
            near_zero_counts.push(count);
        }
        assert!(
            near_zero_counts[0] <= near_zero_counts[1]
                && near_zero_counts[1] <= near_zero_counts[2],
            "{near_zero_counts:?}"
        );
    }
}
