//! Linear least squares through ridge-stabilized normal equations.
//!
//! Design matrices in this toolkit are small (documents x spline-basis
//! width), so forming the Gram matrix and Cholesky-factoring it is the
//! right tradeoff.

use super::{Matrix, NumericsError};
use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor<T> {
    l: Matrix<T>,
}

impl<T: Scalar> CholeskyFactor<T> {
    /// Factors `m = L * L^T`, failing with [`NumericsError::SingularSystem`]
    /// when a pivot is not safely positive.
    pub fn new(m: &Matrix<T>) -> Result<Self, NumericsError> {
        let n = m.rows();
        let mut l = Matrix::zeros(n, n);
        let max_diag = (0..n).fold(T::zero(), |acc, i| acc.max(m.get(i, i).abs()));
        let threshold = max_diag.max(T::one()) * T::epsilon() * crate::scalar::cast(n.max(1) as f64);
        for j in 0..n {
            let mut diag = m.get(j, j);
            for k in 0..j {
                let v = l.get(j, k);
                diag = diag - v * v;
            }
            if diag <= threshold {
                return Err(NumericsError::SingularSystem { column: j });
            }
            let diag = diag.sqrt();
            l.set(j, j, diag);
            for i in j + 1..n {
                let mut v = m.get(i, j);
                for k in 0..j {
                    v = v - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, v / diag);
            }
        }
        Ok(Self { l })
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.l.rows();
        debug_assert_eq!(rhs.len(), n);
        // Forward then backward substitution.
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut v = y[i];
            for k in 0..i {
                v = v - self.l.get(i, k) * y[k];
            }
            y[i] = v / self.l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in i + 1..n {
                v = v - self.l.get(k, i) * y[k];
            }
            y[i] = v / self.l.get(i, i);
        }
        y
    }

    /// Solves one system per column of `rhs`.
    pub fn solve_columns(&self, rhs: &Matrix<T>) -> Matrix<T> {
        let mut out = Matrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            let col = self.solve(&rhs.col_vec(j));
            out.set_col(j, &col);
        }
        out
    }
}

/// Convenience wrapper: factor `m` and solve for a single right-hand side.
pub fn cholesky_solve<T: Scalar>(m: &Matrix<T>, rhs: &[T]) -> Result<Vec<T>, NumericsError> {
    Ok(CholeskyFactor::new(m)?.solve(rhs))
}

/// Minimizes `||A b - y||^2 + ridge * ||b||^2`.
pub fn solve_least_squares<T: Scalar>(
    a: &Matrix<T>,
    y: &[T],
    ridge: T,
) -> Result<Vec<T>, NumericsError> {
    if a.rows() != y.len() || a.rows() == 0 {
        return Err(NumericsError::DimensionMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: y.len(),
            right_cols: 1,
        });
    }
    let mut gram = a.matmul_at_b(a)?;
    if ridge > T::zero() {
        for i in 0..gram.rows() {
            let v = gram.get(i, i) + ridge;
            gram.set(i, i, v);
        }
    }
    let mut rhs = vec![T::zero(); a.cols()];
    for i in 0..a.rows() {
        let row = a.row(i);
        let yi = y[i];
        for (r, &v) in rhs.iter_mut().zip(row) {
            *r = *r + v * yi;
        }
    }
    cholesky_solve(&gram, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design_returns_targets() {
        let a = Matrix::<f64>::identity(2);
        let beta = solve_least_squares(&a, &[1.0, 2.0], 0.0).unwrap();
        assert!((beta[0] - 1.0).abs() < 1e-12);
        assert!((beta[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_fits_the_mean() {
        let a = Matrix::<f64>::from_vec(2, 1, vec![1.0, 1.0]).unwrap();
        let beta = solve_least_squares(&a, &[1.0, 3.0], 0.0).unwrap();
        assert!((beta[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_design_without_ridge_errors() {
        // Two identical columns.
        let a = Matrix::from_vec(3, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        assert!(matches!(
            solve_least_squares(&a, &[1.0, 2.0, 3.0], 0.0),
            Err(NumericsError::SingularSystem { .. })
        ));
        // Ridge makes it solvable.
        assert!(solve_least_squares(&a, &[1.0, 2.0, 3.0], 1e-6).is_ok());
    }

    #[test]
    fn residual_orthogonal_to_design_columns() {
        let mut a = Matrix::zeros(10, 3);
        let mut y = Vec::with_capacity(10);
        let mut state = 77u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for i in 0..10 {
            for j in 0..3 {
                a.set(i, j, next() + if i == j { 1.0 } else { 0.0 });
            }
            y.push(next() * 3.0);
        }
        let beta = solve_least_squares(&a, &y, 0.0).unwrap();
        for j in 0..3 {
            let mut dot = 0.0;
            for i in 0..10 {
                let fitted: f64 = (0..3).map(|k| a.get(i, k) * beta[k]).sum();
                dot += a.get(i, j) * (y[i] - fitted);
            }
            assert!(dot.abs() < 1e-8, "column {j} not orthogonal: {dot}");
        }
    }
}
