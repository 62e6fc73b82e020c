//! Latent semantic analysis: truncated SVD of the corpus matrix, plus the
//! standard fold-in projection for unseen documents.

use crate::numerics::{truncated_svd, Matrix};
use crate::scalar::Scalar;

use super::BaselineError;

/// `Y ~ X * diag(s) * B` with orthonormal `X` columns and `B` rows.
#[derive(Debug, Clone)]
pub struct LsaModel<T> {
    /// Dictionary factor, `W x T`.
    pub x: Matrix<T>,
    /// Singular values, nonincreasing.
    pub singular_values: Vec<T>,
    /// Topic distribution factor, `T x D`.
    pub b: Matrix<T>,
}

pub fn lsa_fit<T: Scalar>(y: &Matrix<T>, topics: usize) -> Result<LsaModel<T>, BaselineError> {
    let svd = truncated_svd(y, topics)?;
    Ok(LsaModel {
        x: svd.u,
        singular_values: svd.singular_values,
        b: svd.vt,
    })
}

/// Least-squares projection of new columns onto the latent space:
/// `B_new = diag(s)^-1 * X^T * Y_new`.
pub fn lsa_transform<T: Scalar>(
    y_new: &Matrix<T>,
    model: &LsaModel<T>,
) -> Result<Matrix<T>, BaselineError> {
    let smax = model
        .singular_values
        .iter()
        .fold(T::zero(), |acc, &s| acc.max(s));
    let tiny = smax * crate::scalar::cast(1e-12);
    if let Some(index) = model
        .singular_values
        .iter()
        .position(|&s| s <= tiny || s == T::zero())
    {
        return Err(BaselineError::SingularValueZero { index });
    }
    let mut projected = model.x.matmul_at_b(y_new)?;
    for (k, &s) in model.singular_values.iter().enumerate() {
        for v in projected.row_mut(k) {
            *v = *v / s;
        }
    }
    Ok(projected)
}

/// Pseudo-inverse form of the projection: components whose singular value is
/// negligible map to zero rows instead of failing. Rank-deficient corpora
/// (extreme sparsity) stay scoreable this way.
pub fn lsa_transform_pinv<T: Scalar>(
    y_new: &Matrix<T>,
    model: &LsaModel<T>,
) -> Result<Matrix<T>, BaselineError> {
    let smax = model
        .singular_values
        .iter()
        .fold(T::zero(), |acc, &s| acc.max(s));
    let tiny = smax * crate::scalar::cast(1e-12);
    let mut projected = model.x.matmul_at_b(y_new)?;
    for (k, &s) in model.singular_values.iter().enumerate() {
        for v in projected.row_mut(k) {
            *v = if s > tiny { *v / s } else { T::zero() };
        }
    }
    Ok(projected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_corpus_spectrum() {
        let y = Matrix::<f64>::from_vec(3, 3, vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let model = lsa_fit(&y, 2).unwrap();
        assert!((model.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((model.singular_values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_reconstructs_exactly() {
        let mut y = Matrix::zeros(4, 3);
        for i in 0..4 {
            for j in 0..3 {
                y.set(i, j, (i + 1) as f64 * (j + 1) as f64);
            }
        }
        let model = lsa_fit(&y, 1).unwrap();
        let mut scaled = model.x.clone();
        for i in 0..scaled.rows() {
            let v = scaled.get(i, 0) * model.singular_values[0];
            scaled.set(i, 0, v);
        }
        let recon = scaled.matmul(&model.b).unwrap();
        assert!(y.max_abs_diff(&recon).unwrap() < 1e-10);
    }

    #[test]
    fn training_columns_fold_back_to_their_factors() {
        let mut state = 5u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data: Vec<f64> = (0..20 * 10).map(|_| next() + 0.05).collect();
        let y = Matrix::from_vec(20, 10, data).unwrap();
        let model = lsa_fit(&y, 5).unwrap();
        let refolded = lsa_transform(&y, &model).unwrap();
        assert!(model.b.max_abs_diff(&refolded).unwrap() < 1e-8);
    }

    #[test]
    fn zero_columns_project_to_zero() {
        let y = Matrix::from_vec(3, 2, vec![1.0, 0.0, 0.0, 2.0, 1.0, 0.5]).unwrap();
        let model = lsa_fit(&y, 2).unwrap();
        let zero = Matrix::<f64>::zeros(3, 1);
        let projected = lsa_transform(&zero, &model).unwrap();
        assert!(projected.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn zero_singular_value_blocks_the_projection() {
        // Rank-1 corpus factored at rank 2 leaves a zero singular value.
        let mut y = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                y.set(i, j, ((i + 1) * (j + 1)) as f64);
            }
        }
        let model = lsa_fit(&y, 2).unwrap();
        assert!(matches!(
            lsa_transform(&y, &model),
            Err(BaselineError::SingularValueZero { .. })
        ));
        // The pseudo-inverse form projects the live component and zeroes the
        // dead one.
        let projected = lsa_transform_pinv(&y, &model).unwrap();
        assert!(model.b.row(0).iter().zip(projected.row(0)).all(|(a, b)| (a - b).abs() < 1e-8));
        assert!(projected.row(1).iter().all(|&v| v == 0.0));
    }
}
