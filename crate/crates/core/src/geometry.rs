//! Unit-hypersphere geometry.
//!
//! Every embedding handled by the crate is a [`UnitVector`]; dissimilarity
//! between two embeddings is the angle between them, in radians.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm tolerance accepted when adopting an already-normalized vector.
pub const UNIT_TOLERANCE: f64 = 1e-6;
const ZERO_NORM: f64 = 1e-12;
const DEGENERATE_SUM: f64 = 1e-9;

/// A point on the unit hypersphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Adopts `components` as-is after checking that the norm is 1 within
    /// [`UNIT_TOLERANCE`]. Components are not rescaled, so values read from
    /// disk are written back bit-for-bit.
    pub fn from_unit(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: components.len(),
            });
        }
        let norm = euclidean_norm(&components);
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(components))
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        UnitVector::from_unit(value)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(value: UnitVector) -> Self {
        value.0
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Scales `raw` to unit length.
pub fn normalize(raw: &[f64]) -> Result<UnitVector> {
    if raw.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: raw.len(),
        });
    }
    let norm = euclidean_norm(raw);
    if !norm.is_finite() || norm < ZERO_NORM {
        return Err(Error::ZeroVector);
    }
    Ok(UnitVector(raw.iter().map(|x| x / norm).collect()))
}

/// Angle between two unit vectors, in `[0, π]`.
pub fn angular_distance(a: &UnitVector, b: &UnitVector) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            actual: b.dimension(),
        });
    }
    Ok(angle_between(&a.0, &b.0))
}

/// Arccos of the clamped dot product. Bitwise-identical inputs give exactly 0.
#[inline]
pub(crate) fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 0.0;
    }
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Normalized componentwise sum of `vs`.
pub fn angular_mean(vs: &[UnitVector]) -> Result<UnitVector> {
    let dim = check_dimensions(vs)?;
    if let [only] = vs {
        return Ok(only.clone());
    }
    let mut sum = vec![0.0; dim];
    for v in vs {
        for (s, x) in sum.iter_mut().zip(&v.0) {
            *s += x;
        }
    }
    let norm = euclidean_norm(&sum);
    if norm.is_nan() || norm < DEGENERATE_SUM {
        return Err(Error::DegenerateSum { norm });
    }
    sum.iter_mut().for_each(|x| *x /= norm);
    Ok(UnitVector(sum))
}

/// Returns the shared dimension of a nonempty collection.
pub fn check_dimensions(vs: &[UnitVector]) -> Result<usize> {
    let first = vs
        .first()
        .ok_or_else(|| Error::EmptyInput("no vectors".into()))?;
    let dim = first.dimension();
    if let Some(bad) = vs.iter().find(|v| v.dimension() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.dimension(),
        });
    }
    Ok(dim)
}

/// Dot product with eight interleaved partial sums (fixed order, so the
/// result is reproducible) to let the compiler vectorize the loop.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (xa, xb) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += xa[k] * xb[k];
        }
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

fn euclidean_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Symmetric distance matrix with a zero diagonal, stored as a packed strict
/// upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    packed: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix by evaluating `f(i, j)` once for every `i < j`.
    pub fn from_fn<F>(n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let packed = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| f(i, j)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .concat();
        Self { n, packed }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.packed[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.packed[self.offset(j, i)],
        }
    }

    /// Row `i` of the full (mirrored) matrix.
    pub fn row(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.get(i, j))
    }

    /// Restriction of the matrix to `indices`, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> DistanceMatrix {
        DistanceMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }
}

/// Pairwise angular distances between `points`.
///
/// Dot products are computed panel by panel with a blocked matrix product;
/// each entry is produced exactly once, so the result does not depend on how
/// panels are scheduled across threads.
pub fn pairwise_matrix(points: &[UnitVector]) -> Result<DistanceMatrix> {
    if points.is_empty() {
        return Err(Error::TooFewPoints {
            needed: 1,
            actual: 0,
        });
    }
    let dim = check_dimensions(points)?;
    let n = points.len();
    let flat: Vec<f64> = points.iter().flat_map(|p| p.0.iter().copied()).collect();

    const PANEL: usize = 64;
    let packed = (0..n.div_ceil(PANEL))
        .into_par_iter()
        .map(|panel| {
            let lo = panel * PANEL;
            let hi = (lo + PANEL).min(n);
            let (rows, cols) = (hi - lo, n - lo);
            let mut gram = vec![0.0f64; rows * cols];
            // gram = X[lo..hi] · X[lo..n]ᵀ
            unsafe {
                matrixmultiply::dgemm(
                    rows,
                    dim,
                    cols,
                    1.0,
                    flat[lo * dim..].as_ptr(),
                    dim as isize,
                    1,
                    flat[lo * dim..].as_ptr(),
                    1,
                    dim as isize,
                    0.0,
                    gram.as_mut_ptr(),
                    cols as isize,
                    1,
                );
            }
            let mut out = Vec::with_capacity(rows * cols);
            for i in lo..hi {
                let row = &gram[(i - lo) * cols..(i - lo + 1) * cols];
                for j in (i + 1)..n {
                    out.push(if points[i].0 == points[j].0 {
                        0.0
                    } else {
                        row[j - lo].clamp(-1.0, 1.0).acos()
                    });
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .concat();
    Ok(DistanceMatrix { n, packed })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use proptest::prelude::*;

    use super::*;

    fn uv(v: &[f64]) -> UnitVector {
        normalize(v).unwrap()
    }

    #[test]
    fn normalize_scales() {
        assert_eq!(normalize(&[3.0, 4.0]).unwrap().as_slice(), &[0.6, 0.8]);
        assert_eq!(
            normalize(&[1.0, 0.0, 0.0]).unwrap().as_slice(),
            &[1.0, 0.0, 0.0]
        );
        assert!(matches!(normalize(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn distance_examples() {
        let x = uv(&[1.0, 0.0]);
        let y = uv(&[0.0, 1.0]);
        let nx = uv(&[-1.0, 0.0]);
        assert_eq!(angular_distance(&x, &x).unwrap(), 0.0);
        assert!((angular_distance(&x, &y).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angular_distance(&x, &nx).unwrap(), PI);
        let z = uv(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            angular_distance(&x, &z),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn clamps_drift() {
        // Components whose dot product rounds above 1.
        let a = UnitVector(vec![0.6000000000000001, 0.8]);
        let b = UnitVector(vec![0.6, 0.8000000000000002]);
        let d = angular_distance(&a, &b).unwrap();
        assert!(d.is_finite() && d >= 0.0);
    }

    #[test]
    fn mean_examples() {
        let v = uv(&[0.3, -0.2, 0.9]);
        assert_eq!(angular_mean(std::slice::from_ref(&v)).unwrap(), v);
        let m = angular_mean(&[uv(&[1.0, 0.0]), uv(&[0.0, 1.0])]).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!((m.as_slice()[0] - h).abs() < 1e-15 && (m.as_slice()[1] - h).abs() < 1e-15);
        assert!(matches!(
            angular_mean(&[uv(&[1.0, 0.0]), uv(&[-1.0, 0.0])]),
            Err(Error::DegenerateSum { .. })
        ));
        assert!(angular_mean(&[]).is_err());
    }

    #[test]
    fn matrix_examples() {
        let one = pairwise_matrix(&[uv(&[1.0, 2.0])]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.get(0, 0), 0.0);

        let basis = [
            uv(&[1.0, 0.0, 0.0]),
            uv(&[0.0, 1.0, 0.0]),
            uv(&[0.0, 0.0, 1.0]),
        ];
        let m = pairwise_matrix(&basis).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { FRAC_PI_2 };
                assert!((m.get(i, j) - want).abs() < 1e-15);
            }
        }
        assert!(pairwise_matrix(&[]).is_err());
        assert!(pairwise_matrix(&[uv(&[1.0, 0.0]), uv(&[1.0, 0.0, 0.0])]).is_err());
    }

    #[test]
    fn matrix_matches_elementwise_distances() {
        // Spans several panels.
        let pts: Vec<_> = (0..150)
            .map(|k| {
                let k = k as f64;
                uv(&[
                    (k * 0.7).sin(),
                    (k * 1.3).cos(),
                    (k * 0.11).sin() + 0.2,
                    (k * 2.9).cos(),
                ])
            })
            .collect();
        let m = pairwise_matrix(&pts).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let want = angular_distance(&pts[i], &pts[j]).unwrap();
                assert!((m.get(i, j) - want).abs() < 1e-12, "({i},{j})");
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
    }

    #[test]
    fn submatrix_reindexes() {
        let pts: Vec<_> = (0..6)
            .map(|k| uv(&[(k as f64).cos(), (k as f64).sin(), 0.5]))
            .collect();
        let m = pairwise_matrix(&pts).unwrap();
        let sub = m.submatrix(&[4, 1, 3]);
        assert_eq!(sub.get(0, 1), m.get(4, 1));
        assert_eq!(sub.get(2, 0), m.get(3, 4));
    }

    fn raw_vec() -> impl Strategy<Value = Vec<f64>> {
        (2usize..8)
            .prop_flat_map(|d| proptest::collection::vec(-1.0f64..1.0, d))
            .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in raw_vec()) {
            let once = normalize(&raw).unwrap();
            let twice = normalize(once.as_slice()).unwrap();
            for (a, b) in once.as_slice().iter().zip(twice.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-15);
            }
            let norm = dot(once.as_slice(), once.as_slice()).sqrt();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn mean_of_copies(raw in raw_vec(), k in 1usize..20) {
            let v = normalize(&raw).unwrap();
            let m = angular_mean(&vec![v.clone(); k]).unwrap();
            for (a, b) in m.as_slice().iter().zip(v.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
