//! Independent-route checks of the dense kernel: naive triple-loop products,
//! an eigenvalue-route spectrum, and Gaussian-elimination least squares.

use semipartm_core::numerics::{solve_least_squares, truncated_svd, Matrix};

fn lcg(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

fn random_matrix(rows: usize, cols: usize, state: &mut u64) -> Matrix<f64> {
    let data: Vec<f64> = (0..rows * cols).map(|_| lcg(state) * 2.0 - 1.0).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

#[test]
fn matmul_matches_triple_loop_oracle() {
    let mut state = 11u64;
    let a = random_matrix(5, 4, &mut state);
    let b = random_matrix(4, 3, &mut state);
    let fast = a.matmul(&b).unwrap();
    for i in 0..5 {
        for j in 0..3 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += a.get(i, k) * b.get(k, j);
            }
            assert!((fast.get(i, j) - acc).abs() < 1e-12);
        }
    }
}

#[test]
fn product_is_associative() {
    let mut state = 23u64;
    for _ in 0..10 {
        let a = random_matrix(4, 3, &mut state);
        let b = random_matrix(3, 5, &mut state);
        let c = random_matrix(5, 2, &mut state);
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right).unwrap() < 1e-10);
    }
}

#[test]
fn norms_match_elementwise_loops() {
    let mut state = 31u64;
    let a = random_matrix(4, 4, &mut state);
    let mut sq = 0.0;
    let mut l1 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            sq += a.get(i, j) * a.get(i, j);
            l1 += a.get(i, j).abs();
        }
    }
    assert!((a.frobenius_sq() - sq).abs() < 1e-12);
    assert!((a.l1_norm() - l1).abs() < 1e-12);
}

/// Two-sided Jacobi eigenvalue iteration on a symmetric matrix; a code path
/// independent of the one-sided SVD.
fn symmetric_eigenvalues(g: &Matrix<f64>) -> Vec<f64> {
    let n = g.rows();
    let mut a = g.clone();
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a.get(p, q).abs();
            }
        }
        if off < 1e-13 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() < 1e-15 {
                    continue;
                }
                let theta = 0.5 * (2.0 * apq).atan2(a.get(q, q) - a.get(p, p));
                let (s, c) = theta.sin_cos();
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

#[test]
fn singular_values_match_gram_eigenvalue_route() {
    let mut state = 47u64;
    for _ in 0..5 {
        let a = random_matrix(6, 4, &mut state);
        let svd = truncated_svd(&a, 4).unwrap();
        let gram = a.matmul_at_b(&a).unwrap();
        let eigs = symmetric_eigenvalues(&gram);
        for (s, lambda) in svd.singular_values.iter().zip(&eigs) {
            assert!(
                (s - lambda.max(0.0).sqrt()).abs() < 1e-8,
                "singular value {s} vs eigen route {}",
                lambda.max(0.0).sqrt()
            );
        }
    }
}

#[test]
fn full_rank_truncated_svd_reconstructs() {
    let mut state = 53u64;
    let a = random_matrix(6, 4, &mut state);
    let svd = truncated_svd(&a, 4).unwrap();
    let mut us = svd.u.clone();
    for k in 0..4 {
        for i in 0..6 {
            us.set(i, k, us.get(i, k) * svd.singular_values[k]);
        }
    }
    let recon = us.matmul(&svd.vt).unwrap();
    assert!(a.max_abs_diff(&recon).unwrap() < 1e-8);
    let utu = svd.u.matmul_at_b(&svd.u).unwrap();
    assert!(utu.max_abs_diff(&Matrix::identity(4)).unwrap() < 1e-8);
}

/// Gaussian elimination with partial pivoting on the normal equations; a
/// solver independent of the Cholesky path.
fn gaussian_normal_solve(a: &Matrix<f64>, y: &[f64], ridge: f64) -> Vec<f64> {
    let n = a.cols();
    let mut m = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for r in 0..a.rows() {
                acc += a.get(r, i) * a.get(r, j);
            }
            m[i][j] = acc + if i == j { ridge } else { 0.0 };
        }
        let mut acc = 0.0;
        for r in 0..a.rows() {
            acc += a.get(r, i) * y[r];
        }
        m[i][n] = acc;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut beta = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in row + 1..n {
            acc -= m[row][k] * beta[k];
        }
        beta[row] = acc / m[row][row];
    }
    beta
}

#[test]
fn least_squares_matches_gaussian_elimination_oracle() {
    let mut state = 61u64;
    for _ in 0..5 {
        let mut a = random_matrix(10, 3, &mut state);
        for i in 0..3 {
            // Keep the system well conditioned.
            a.set(i, i, a.get(i, i) + 2.0);
        }
        let y: Vec<f64> = (0..10).map(|_| lcg(&mut state) * 4.0 - 2.0).collect();
        let fast = solve_least_squares(&a, &y, 0.0).unwrap();
        let oracle = gaussian_normal_solve(&a, &y, 0.0);
        for (f, o) in fast.iter().zip(&oracle) {
            assert!((f - o).abs() < 1e-8, "{f} vs {o}");
        }
    }
}
