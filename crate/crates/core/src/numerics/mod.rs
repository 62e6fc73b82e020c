//! Dense-matrix kernel shared by every model module: products, transposes,
//! elementwise ops, norms, truncated SVD, and linear least squares.
//!
//! Storage is row-major and dense throughout; the largest simulation cell
//! (3500x3000) is ~10.5M entries, which is comfortably dense territory.

mod lstsq;
mod svd;

pub use lstsq::{cholesky_solve, solve_least_squares, CholeskyFactor};
pub use svd::{truncated_svd, Svd};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("data length {len} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("non-finite value at ({row}, {col})")]
    NonFiniteValue { row: usize, col: usize },
    #[error("SVD did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("singular system: normal equations have a non-positive pivot at column {column}")]
    SingularSystem { column: usize },
    #[error("rank {rank} outside valid range 1..={max}")]
    InvalidRank { rank: usize, max: usize },
}

/// Dense row-major matrix over a [`Scalar`] type.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds from row-major data, rejecting shape mismatches and non-finite
    /// values (the kernel admits no NaN/Inf).
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::NonFiniteValue {
                row: if cols == 0 { 0 } else { pos / cols },
                col: if cols == 0 { 0 } else { pos % cols },
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, NumericsError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(NumericsError::BadShape {
                    rows: n_rows,
                    cols: n_cols,
                    len: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(n_rows, n_cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, row: usize) -> &mut [T] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn col_vec(&self, col: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, &v) in self.row(i).iter().enumerate() {
                out.data[j * self.rows + i] = v;
            }
        }
        out
    }

    /// Standard product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.cols != rhs.rows {
            return Err(self.mismatch(rhs));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a_ik) in a_row.iter().enumerate() {
                if a_ik == T::zero() {
                    continue;
                }
                let b_row = rhs.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a_ik * b;
                }
            }
        }
        Ok(out)
    }

    /// `self^T * rhs` without materializing the transpose.
    pub fn matmul_at_b(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.rows != rhs.rows {
            return Err(self.mismatch(rhs));
        }
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = rhs.row(k);
            for (i, &a_ki) in a_row.iter().enumerate() {
                if a_ki == T::zero() {
                    continue;
                }
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a_ki * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * rhs^T` as row-by-row dot products.
    pub fn matmul_a_bt(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.cols != rhs.cols {
            return Err(self.mismatch(rhs));
        }
        let mut out = Self::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * rhs.rows..(i + 1) * rhs.rows];
            for (j, o) in out_row.iter_mut().enumerate() {
                let b_row = rhs.row(j);
                let mut acc = T::zero();
                for (&a, &b) in a_row.iter().zip(b_row) {
                    acc = acc + a * b;
                }
                *o = acc;
            }
        }
        Ok(out)
    }

    /// Sum of squared entries (squared Frobenius norm).
    pub fn frobenius_sq(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
    }

    /// Sum of absolute entries.
    pub fn l1_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc + v.abs())
    }

    /// `||self - rhs||_F^2` without allocating the difference.
    pub fn diff_frobenius_sq(&self, rhs: &Self) -> Result<T, NumericsError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.mismatch(rhs));
        }
        let mut acc = T::zero();
        for (&a, &b) in self.data.iter().zip(&rhs.data) {
            let d = a - b;
            acc = acc + d * d;
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> Result<T, NumericsError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.mismatch(rhs));
        }
        let mut worst = T::zero();
        for (&a, &b) in self.data.iter().zip(&rhs.data) {
            worst = worst.max((a - b).abs());
        }
        Ok(worst)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.mismatch(rhs));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.mismatch(rhs));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scaled(&self, factor: T) -> Self {
        self.map(|v| v * factor)
    }

    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (d, &j) in dst.iter_mut().zip(indices) {
                *d = src[j];
            }
        }
        out
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(indices.len(), self.cols);
        for (dst, &i) in (0..indices.len()).zip(indices) {
            out.row_mut(dst).copy_from_slice(self.row(i));
        }
        out
    }

    pub fn set_col(&mut self, col: usize, values: &[T]) {
        for (i, &v) in values.iter().enumerate() {
            self.set(i, col, v);
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| *v >= T::zero())
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    fn mismatch(&self, rhs: &Self) -> NumericsError {
        NumericsError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: rhs.rows,
            right_cols: rhs.cols,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m64(rows: usize, cols: usize, data: &[f64]) -> Matrix<f64> {
        Matrix::from_vec(rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn identity_product_is_identity_map() {
        let a = m64(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let i = Matrix::<f64>::identity(2);
        assert_eq!(i.matmul(&a).unwrap(), a);
    }

    #[test]
    fn row_times_column() {
        let a = m64(1, 2, &[1.0, 2.0]);
        let b = m64(2, 1, &[3.0, 4.0]);
        let p = a.matmul(&b).unwrap();
        assert_eq!(p.get(0, 0), 11.0);
    }

    #[test]
    fn matmul_rejects_mismatched_inner_dims() {
        let a = m64(2, 3, &[0.0; 6]);
        let b = m64(2, 2, &[0.0; 4]);
        assert!(matches!(
            a.matmul(&b),
            Err(NumericsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transposed_kernels_match_explicit_transpose() {
        let a = m64(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = m64(3, 4, &(0..12).map(|v| v as f64 * 0.5 - 2.0).collect::<Vec<_>>());
        let via_explicit = a.transpose().matmul(&b).unwrap();
        let via_kernel = a.matmul_at_b(&b).unwrap();
        assert!(via_explicit.max_abs_diff(&via_kernel).unwrap() < 1e-14);

        let c = m64(5, 2, &(0..10).map(|v| (v as f64).sin()).collect::<Vec<_>>());
        let via_explicit = a.matmul(&c.transpose()).unwrap();
        let via_kernel = a.matmul_a_bt(&c).unwrap();
        assert!(via_explicit.max_abs_diff(&via_kernel).unwrap() < 1e-14);
    }

    #[test]
    fn norms_on_three_four_five() {
        let a = m64(1, 2, &[3.0, -4.0]);
        assert_eq!(a.frobenius_sq(), 25.0);
        assert_eq!(a.l1_norm(), 7.0);
        let z = Matrix::<f64>::zeros(3, 3);
        assert_eq!(z.frobenius_sq(), 0.0);
        assert_eq!(z.l1_norm(), 0.0);
    }

    #[test]
    fn from_vec_rejects_nan() {
        let err = Matrix::from_vec(1, 2, vec![1.0, f64::NAN]);
        assert!(matches!(
            err,
            Err(NumericsError::NonFiniteValue { row: 0, col: 1 })
        ));
    }

    #[test]
    fn frobenius_equals_trace_of_gram() {
        let a = m64(2, 3, &[1.0, -2.0, 0.5, 3.0, 4.0, -1.0]);
        let gram = a.matmul_at_b(&a).unwrap();
        let trace: f64 = (0..3).map(|i| gram.get(i, i)).sum();
        assert!((a.frobenius_sq() - trace).abs() < 1e-10);
    }

    #[test]
    fn select_columns_picks_and_orders() {
        let a = m64(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let s = a.select_columns(&[2, 0]);
        assert_eq!(s.row(0), &[3.0, 1.0]);
        assert_eq!(s.row(1), &[6.0, 4.0]);
    }

    #[test]
    fn works_in_single_precision() {
        let a = Matrix::<f32>::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let p = a.matmul(&a).unwrap();
        assert_eq!(p.get(0, 0), 7.0f32);
    }
}
