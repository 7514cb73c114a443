//! Minimum-cost perfect matching between two equal-size point sets.

use crate::C64;

/// Hungarian algorithm on a square cost matrix given row by row.
///
/// Returns `assign` with `assign[row] = column`, minimizing the summed cost.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");

    // Potentials and matching with a sentinel column 0 (1-based internally).
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut col_of_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        col_of_row[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_of_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_of_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_of_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_of_row[j0] = col_of_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        if col_of_row[j] != 0 {
            assign[col_of_row[j] - 1] = j - 1;
        }
    }
    assign
}

/// Pairs `a[i]` with `b[assign[i]]` minimizing total distance.
pub fn match_points(a: &[C64], b: &[C64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len());
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    min_cost_assignment(&cost)
}

/// Largest pairwise distance under the optimal matching.
pub fn matched_max_distance(a: &[C64], b: &[C64]) -> f64 {
    let assign = match_points(a, b);
    assign.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
