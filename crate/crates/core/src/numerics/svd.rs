//! Truncated SVD via one-sided Jacobi rotations.
//!
//! Accurate and simple at the sizes this toolkit works with; columns of the
//! work matrix are orthogonalized pairwise until every off-diagonal Gram
//! entry is negligible.

use super::{Matrix, NumericsError};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

/// Truncated factorization `A ~ U * diag(s) * Vt`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// Left singular vectors, `rows x rank`, orthonormal columns.
    pub u: Matrix<T>,
    /// Singular values, nonincreasing, length `rank`.
    pub singular_values: Vec<T>,
    /// Right singular vectors, `rank x cols`, orthonormal rows.
    pub vt: Matrix<T>,
}

pub fn truncated_svd<T: Scalar>(a: &Matrix<T>, rank: usize) -> Result<Svd<T>, NumericsError> {
    let max_rank = a.rows().min(a.cols());
    if rank < 1 || rank > max_rank {
        return Err(NumericsError::InvalidRank {
            rank,
            max: max_rank,
        });
    }
    if a.rows() >= a.cols() {
        jacobi(a, rank)
    } else {
        // Factor the transpose and swap the roles of U and V.
        let svd = jacobi(&a.transpose(), rank)?;
        Ok(Svd {
            u: svd.vt.transpose(),
            singular_values: svd.singular_values,
            vt: svd.u.transpose(),
        })
    }
}

fn jacobi<T: Scalar>(a: &Matrix<T>, rank: usize) -> Result<Svd<T>, NumericsError> {
    let m = a.rows();
    let n = a.cols();
    // Column-major working copies: G starts as A, V as I; rotations applied
    // to both keep A*V == G as an invariant.
    let mut g: Vec<Vec<T>> = (0..n).map(|j| a.col_vec(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut col = vec![T::zero(); n];
            col[j] = T::one();
            col
        })
        .collect();

    let tol = crate::scalar::cast::<T>(1e-10).max(T::epsilon() * crate::scalar::cast(4.0));
    let tol_sq = tol * tol;
    // Columns whose norm is negligible against the matrix scale are treated
    // as zero; rotating them against each other only churns underflow noise.
    let scale = a.frobenius_sq();
    let zero_floor_sq = scale * T::epsilon() * T::epsilon();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (app, aqq, apq) = gram_entries(&g[p], &g[q]);
                if app <= zero_floor_sq || aqq <= zero_floor_sq {
                    continue;
                }
                if apq == T::zero() || apq * apq <= tol_sq * app * aqq {
                    continue;
                }
                rotated = true;
                let two = crate::scalar::cast::<T>(2.0);
                let zeta = (aqq - app) / (two * apq);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                rotate_pair(&mut g, p, q, cs, sn);
                rotate_pair(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let zero_floor = zero_floor_sq.sqrt();
    let norms: Vec<T> = g
        .iter()
        .map(|col| {
            let norm = column_norm(col);
            if norm <= zero_floor {
                T::zero()
            } else {
                norm
            }
        })
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let mut u = Matrix::zeros(m, rank);
    let mut vt = Matrix::zeros(rank, n);
    let mut singular_values = Vec::with_capacity(rank);
    for (k, &j) in order.iter().take(rank).enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > T::zero() {
            for i in 0..m {
                u.set(i, k, g[j][i] / s);
            }
        }
        for i in 0..n {
            vt.set(k, i, v[j][i]);
        }
    }
    Ok(Svd {
        u,
        singular_values,
        vt,
    })
}

fn gram_entries<T: Scalar>(p: &[T], q: &[T]) -> (T, T, T) {
    let mut app = T::zero();
    let mut aqq = T::zero();
    let mut apq = T::zero();
    for (&x, &y) in p.iter().zip(q) {
        app = app + x * x;
        aqq = aqq + y * y;
        apq = apq + x * y;
    }
    (app, aqq, apq)
}

fn rotate_pair<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, cs: T, sn: T) {
    let (head, tail) = cols.split_at_mut(q);
    let col_p = &mut head[p];
    let col_q = &mut tail[0];
    for (x, y) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let xp = cs * *x - sn * *y;
        let yq = sn * *x + cs * *y;
        *x = xp;
        *y = yq;
    }
}

fn column_norm<T: Scalar>(col: &[T]) -> T {
    col.iter()
        .fold(T::zero(), |acc, &v| acc + v * v)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(svd: &Svd<f64>) -> Matrix<f64> {
        let rank = svd.singular_values.len();
        let mut us = svd.u.clone();
        for k in 0..rank {
            for i in 0..us.rows() {
                let v = us.get(i, k) * svd.singular_values[k];
                us.set(i, k, v);
            }
        }
        us.matmul(&svd.vt).unwrap()
    }

    #[test]
    fn diagonal_input_yields_its_diagonal() {
        let a = Matrix::<f64>::from_vec(3, 3, vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let svd = truncated_svd(&a, 2).unwrap();
        assert!((svd.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((svd.singular_values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer_product_reconstructs_exactly() {
        let u = [1.0, 2.0, 3.0];
        let v = [0.5, -1.0, 2.0, 4.0];
        let mut a = Matrix::zeros(3, 4);
        for i in 0..3 {
            for j in 0..4 {
                a.set(i, j, u[i] * v[j]);
            }
        }
        let svd = truncated_svd(&a, 1).unwrap();
        let back = reconstruct(&svd);
        assert!(a.max_abs_diff(&back).unwrap() < 1e-10);
    }

    #[test]
    fn singular_values_nonincreasing_and_vectors_orthonormal() {
        let mut a = Matrix::zeros(6, 4);
        let mut state = 12345u64;
        for i in 0..6 {
            for j in 0..4 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                a.set(i, j, ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0);
            }
        }
        let svd = truncated_svd(&a, 4).unwrap();
        for w in svd.singular_values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let utu = svd.u.matmul_at_b(&svd.u).unwrap();
        let vvt = svd.vt.matmul_a_bt(&svd.vt).unwrap();
        let eye = Matrix::<f64>::identity(4);
        assert!(utu.max_abs_diff(&eye).unwrap() < 1e-8);
        assert!(vvt.max_abs_diff(&eye).unwrap() < 1e-8);
        assert!(a.max_abs_diff(&reconstruct(&svd)).unwrap() < 1e-8);
    }

    #[test]
    fn wide_matrices_go_through_the_transpose() {
        let a = Matrix::<f64>::from_vec(2, 3, vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        let svd = truncated_svd(&a, 2).unwrap();
        assert!((svd.singular_values[0] - 2.0).abs() < 1e-12);
        assert!((svd.singular_values[1] - 1.0).abs() < 1e-12);
        assert!(a.max_abs_diff(&reconstruct(&svd)).unwrap() < 1e-10);
    }

    #[test]
    fn invalid_rank_is_rejected() {
        let a = Matrix::<f64>::zeros(3, 3);
        assert!(matches!(
            truncated_svd(&a, 0),
            Err(NumericsError::InvalidRank { .. })
        ));
        assert!(matches!(
            truncated_svd(&a, 4),
            Err(NumericsError::InvalidRank { .. })
        ));
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let a = Matrix::<f64>::zeros(4, 3);
        let svd = truncated_svd(&a, 3).unwrap();
        assert!(svd.singular_values.iter().all(|&s| s == 0.0));
    }
}
