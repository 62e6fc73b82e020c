//! B-spline basis evaluation via the Cox-de Boor recursion.
//!
//! Knot vectors are clamped: the boundary knots repeat `degree + 1` times,
//! interior knots sit at training-data quantiles. Evaluation points outside
//! the boundary are clamped onto it, so every basis row is a partition of
//! unity.

use crate::numerics::Matrix;
use crate::scalar::{cast, Scalar};

use super::SplineError;

/// Shape of the per-covariate spline basis. Knots are placed at training
/// quantiles; out-of-range inputs clamp to the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineBasisSpec {
    pub degree: usize,
    pub interior_knots: usize,
}

impl Default for SplineBasisSpec {
    fn default() -> Self {
        Self {
            degree: 3,
            interior_knots: 5,
        }
    }
}

impl SplineBasisSpec {
    pub fn validate(&self) -> Result<(), SplineError> {
        if self.degree < 1 {
            return Err(SplineError::InvalidKnots(format!(
                "degree must be at least 1, got {}",
                self.degree
            )));
        }
        Ok(())
    }
}

/// Number of basis functions implied by a full knot vector.
pub fn basis_count(knots: &[f64], degree: usize) -> usize {
    knots.len().saturating_sub(degree + 1)
}

/// Builds a clamped knot vector from training values: boundary knots at the
/// data min/max repeated `degree + 1` times, interior knots at quantiles.
/// Coincident interior candidates are deduplicated.
pub fn quantile_knots<T: Scalar>(values: &[T], spec: &SplineBasisSpec) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().map(|v| v.to_f64_lossy()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let min = sorted[0];
    let max = sorted[sorted.len() - 1];
    let mut interior = Vec::with_capacity(spec.interior_knots);
    for k in 1..=spec.interior_knots {
        let p = k as f64 / (spec.interior_knots + 1) as f64;
        let q = quantile_sorted(&sorted, p);
        if q > min && q < max && interior.last().is_none_or(|&last| q > last) {
            interior.push(q);
        }
    }
    let mut knots = Vec::with_capacity(2 * (spec.degree + 1) + interior.len());
    knots.extend(std::iter::repeat(min).take(spec.degree + 1));
    knots.extend(interior);
    knots.extend(std::iter::repeat(max).take(spec.degree + 1));
    knots
}

/// Linear-interpolation quantile on sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

fn validate_knots(knots: &[f64], degree: usize) -> Result<(), SplineError> {
    if knots.len() < 2 * (degree + 1) {
        return Err(SplineError::InvalidKnots(format!(
            "need at least {} knots for degree {}, got {}",
            2 * (degree + 1),
            degree,
            knots.len()
        )));
    }
    if knots.windows(2).any(|w| w[0] > w[1]) {
        return Err(SplineError::InvalidKnots(
            "knot vector must be nondecreasing".to_string(),
        ));
    }
    let m = basis_count(knots, degree);
    if knots[degree] >= knots[m] {
        return Err(SplineError::InvalidKnots(
            "knot span has zero width".to_string(),
        ));
    }
    Ok(())
}

/// Evaluates the basis at every value: an `n x m` matrix whose rows sum to 1.
pub fn build_basis<T: Scalar>(
    values: &[T],
    degree: usize,
    knots: &[f64],
) -> Result<Matrix<T>, SplineError> {
    validate_knots(knots, degree)?;
    let m = basis_count(knots, degree);
    let mut out = Matrix::zeros(values.len(), m);
    let mut scratch = vec![0.0f64; degree + 1];
    let mut left = vec![0.0f64; degree + 1];
    let mut right = vec![0.0f64; degree + 1];
    for (row, value) in values.iter().enumerate() {
        let x = value.to_f64_lossy().clamp(knots[degree], knots[m]);
        let span = find_span(knots, degree, m, x);
        basis_at(knots, degree, span, x, &mut scratch, &mut left, &mut right);
        let out_row = out.row_mut(row);
        for (r, &v) in scratch.iter().enumerate() {
            out_row[span - degree + r] = cast(v);
        }
    }
    Ok(out)
}

/// Largest span index `k` in `[degree, m-1]` with `knots[k] <= x < knots[k+1]`;
/// the right boundary folds into the last span.
fn find_span(knots: &[f64], degree: usize, m: usize, x: f64) -> usize {
    if x >= knots[m] {
        return m - 1;
    }
    if x <= knots[degree] {
        return degree;
    }
    let mut lo = degree;
    let mut hi = m;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if knots[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Triangular Cox-de Boor recurrence; fills `n[0..=degree]` with the
/// nonvanishing basis values at `x`.
fn basis_at(
    knots: &[f64],
    degree: usize,
    span: usize,
    x: f64,
    n: &mut [f64],
    left: &mut [f64],
    right: &mut [f64],
) {
    n[0] = 1.0;
    for d in 1..=degree {
        left[d] = x - knots[span + 1 - d];
        right[d] = knots[span + d] - x;
        let mut saved = 0.0;
        for r in 0..d {
            let denom = right[r + 1] + left[d - r];
            let temp = n[r] / denom;
            n[r] = saved + right[r + 1] * temp;
            saved = left[d - r] * temp;
        }
        n[d] = saved;
    }
}
