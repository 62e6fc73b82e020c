//! Minimum-cost assignment via the potentials (shortest augmenting path)
//! form of the Hungarian algorithm, O(n^3). Deterministic: scanning order
//! breaks ties toward lower indices.

use crate::numerics::Matrix;

/// Returns, for each row, the column it is assigned to. `cost` must be
/// square.
pub fn min_cost_assignment(cost: &Matrix<f64>) -> Vec<usize> {
    let n = cost.rows();
    assert_eq!(n, cost.cols(), "assignment needs a square cost matrix");
    if n == 0 {
        return Vec::new();
    }
    // 1-indexed arrays with a virtual column 0, after the classic
    // potentials formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut assigned_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        assigned_row[0] = row;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = assigned_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let slack = cost.get(i0 - 1, j - 1) - u[i0] - v[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[assigned_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if assigned_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assigned_row[j0] = assigned_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if assigned_row[j] > 0 {
            assignment[assigned_row[j] - 1] = j - 1;
        }
    }
    assignment
}
