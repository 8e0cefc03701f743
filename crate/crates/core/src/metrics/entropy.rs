//! Evenness of a point set over a 2-D grid partition.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitVector;

/// Explicit grid extent; by default the grid spans the points' bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    /// Cells per axis.
    #[serde(default = "EntropyConfig::default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub bounds: Option<GridBounds>,
}

impl EntropyConfig {
    fn default_grid() -> usize {
        5
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid == 0 {
            return Err(Error::BadParams("entropy grid must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for EntropyConfig {
    fn default() -> Self {
        Self {
            grid: 5,
            bounds: None,
        }
    }
}

/// Shannon entropy (natural log) of the occupancy of a `grid × grid`
/// partition of the 2-D points. Values on the upper edge fall in the last cell.
pub fn grid_entropy(coords: &[[f64; 2]], config: &EntropyConfig) -> Result<f64> {
    config.validate()?;
    if coords.is_empty() {
        return Err(Error::EmptyInput("entropy of no points".into()));
    }
    let bounds = config.bounds.unwrap_or_else(|| bounding_box(coords));
    let g = config.grid;
    let mut counts = vec![0usize; g * g];
    for c in coords {
        let bx = cell(c[0], bounds.x_min, bounds.x_max, g);
        let by = cell(c[1], bounds.y_min, bounds.y_max, g);
        counts[by * g + bx] += 1;
    }
    // cells sharing a count are summed as one term, (m·c/N)·ln(N/c), so
    // k equally filled cells give ln k without accumulated rounding
    let mut by_count: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in counts.iter().filter(|&&c| c > 0) {
        *by_count.entry(c).or_insert(0) += 1;
    }
    let n = coords.len();
    let h: f64 = by_count
        .iter()
        .map(|(&c, &m)| (m * c) as f64 / n as f64 * (n as f64 / c as f64).ln())
        .sum();
    Ok(h.max(0.0))
}

fn bounding_box(coords: &[[f64; 2]]) -> GridBounds {
    let mut b = GridBounds {
        x_min: f64::INFINITY,
        x_max: f64::NEG_INFINITY,
        y_min: f64::INFINITY,
        y_max: f64::NEG_INFINITY,
    };
    for c in coords {
        b.x_min = b.x_min.min(c[0]);
        b.x_max = b.x_max.max(c[0]);
        b.y_min = b.y_min.min(c[1]);
        b.y_max = b.y_max.max(c[1]);
    }
    b
}

fn cell(v: f64, lo: f64, hi: f64, g: usize) -> usize {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return 0;
    }
    let t = ((v - lo) / (hi - lo) * g as f64).floor();
    if t <= 0.0 {
        0
    } else {
        (t as usize).min(g - 1)
    }
}

/// Projection onto the top two principal axes of the centered points. Each
/// axis is signed so that its first non-negligible loading is positive.
/// Axes with (numerically) zero variance project to 0.
pub fn pca_projection(points: &[UnitVector]) -> Result<Vec<[f64; 2]>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput("projection of no points".into()));
    }
    let d = crate::geometry::check_dimensions(points)?;
    let mut mean = vec![0.0; d];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p.as_slice()) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered = DMatrix::from_fn(n, d, |i, k| points[i].as_slice()[k] - mean[k]);

    // Eigen-decompose whichever of the covariance (d×d) or Gram (n×n)
    // matrix is smaller; both share their nonzero spectrum.
    let axes: Vec<DVector<f64>> = if d <= n {
        let cov = centered.transpose() * &centered;
        top_eigenvectors(cov).into_iter().map(|(_, v)| v).collect()
    } else {
        let gram = &centered * centered.transpose();
        top_eigenvectors(gram)
            .into_iter()
            .map(|(_, u)| {
                let v = centered.transpose() * u;
                let norm = v.norm();
                if norm > 0.0 {
                    v / norm
                } else {
                    v
                }
            })
            .collect()
    };

    let scale = centered.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let mut projected = vec![[0.0; 2]; n];
    for (k, axis) in axes.iter().enumerate() {
        let Some(axis) = signed_axis(axis, scale) else {
            continue;
        };
        let coords = &centered * axis;
        for i in 0..n {
            projected[i][k] = coords[i];
        }
    }
    Ok(projected)
}

/// The two eigenpairs with the largest eigenvalues, descending.
fn top_eigenvectors(m: DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });
    let top = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    order
        .into_iter()
        .take(2)
        .filter(|&k| eig.eigenvalues[k] > 1e-12 * top.max(1e-300) && eig.eigenvalues[k] > 1e-24)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
        .collect()
}

fn signed_axis(axis: &DVector<f64>, scale: f64) -> Option<DVector<f64>> {
    let eps = 1e-9 / scale;
    let first = axis.iter().find(|x| x.abs() > eps)?;
    Some(if *first < 0.0 { -axis } else { axis.clone() })
}
