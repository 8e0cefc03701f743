//! Distance-based diversity metrics over a precomputed distance matrix.
//!
//! These functions are geometry-agnostic: they accept any symmetric matrix,
//! which lets tests run them on Euclidean fixtures as well.

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;
use crate::selection::minimum_spanning_tree;

fn require(matrix: &DistanceMatrix, needed: usize) -> Result<()> {
    if matrix.len() < needed {
        return Err(Error::TooFewPoints {
            needed,
            actual: matrix.len(),
        });
    }
    Ok(())
}

/// Mean distance from point `i` to every other point.
pub fn mean_pairwise(i: usize, matrix: &DistanceMatrix) -> Result<f64> {
    require(matrix, 2)?;
    let n = matrix.len();
    let sum: f64 = (0..n).filter(|&j| j != i).map(|j| matrix.get(i, j)).sum();
    Ok(sum / (n - 1) as f64)
}

/// Distance from point `i` to its nearest neighbour.
pub fn min_pairwise(i: usize, matrix: &DistanceMatrix) -> Result<f64> {
    require(matrix, 2)?;
    Ok(nearest(i, matrix))
}

fn nearest(i: usize, matrix: &DistanceMatrix) -> f64 {
    (0..matrix.len())
        .filter(|&j| j != i)
        .map(|j| matrix.get(i, j))
        .fold(f64::INFINITY, f64::min)
}

/// Sum of all ordered-pair distances divided by N², the zero diagonal
/// included. Note this is smaller than the mean over distinct pairs by a
/// factor (N-1)/N.
pub fn remote_clique(matrix: &DistanceMatrix) -> Result<f64> {
    require(matrix, 1)?;
    let n = matrix.len();
    let mut upper = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            upper += matrix.get(i, j);
        }
    }
    Ok(2.0 * upper / (n * n) as f64)
}

/// Mean nearest-neighbour distance. A single point scores 0.
pub fn chamfer(matrix: &DistanceMatrix) -> Result<f64> {
    require(matrix, 1)?;
    let n = matrix.len();
    if n == 1 {
        return Ok(0.0);
    }
    Ok((0..n).map(|i| nearest(i, matrix)).sum::<f64>() / n as f64)
}

/// Mean edge weight of the minimum spanning tree. A single point scores 0.
pub fn mst_dispersion(matrix: &DistanceMatrix) -> Result<f64> {
    require(matrix, 1)?;
    let edges = minimum_spanning_tree(matrix);
    if edges.is_empty() {
        return Ok(0.0);
    }
    let mut weights: Vec<f64> = edges.iter().map(|e| e.weight).collect();
    // MST weight multisets are unique, so sorting makes the sum independent
    // of which tree Prim happened to build.
    weights.sort_by(f64::total_cmp);
    Ok(weights.iter().sum::<f64>() / weights.len() as f64)
}

/// Index of the point with the smallest total distance to all others
/// (ties: smallest index), and that total.
pub fn medoid(matrix: &DistanceMatrix) -> Result<(usize, f64)> {
    require(matrix, 1)?;
    let mut best = (0, f64::INFINITY);
    for i in 0..matrix.len() {
        let total: f64 = matrix.row(i).sum();
        if total < best.1 {
            best = (i, total);
        }
    }
    Ok(best)
}

/// Mean distance to the medoid, the medoid itself included.
pub fn sparseness(matrix: &DistanceMatrix) -> Result<f64> {
    let (m, _) = medoid(matrix)?;
    Ok(matrix.row(m).sum::<f64>() / matrix.len() as f64)
}

/// `p`-th percentile (0 < p ≤ 100) with linear interpolation between order
/// statistics at rank `p/100 · (N-1)`.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("percentile of no values".into()));
    }
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::BadParams(format!(
            "percentile must lie in (0, 100], got {p}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Ok(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}
