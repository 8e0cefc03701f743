//! Set-level metrics behind a name-keyed registry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::distance::{chamfer, mst_dispersion, percentile, remote_clique, sparseness};
use super::entropy::{grid_entropy, pca_projection, EntropyConfig};
use crate::error::{Error, Result};
use crate::geometry::{
    angle_between, angular_mean, check_dimensions, pairwise_matrix, DistanceMatrix, UnitVector,
};

/// An embedded point set in canonical order, with an optional 2-D
/// projection. Points are sorted lexicographically on construction so every
/// metric sees the same order however the caller arranged its input.
#[derive(Debug)]
pub struct PointSet {
    points: Vec<UnitVector>,
    projection: Option<Vec<[f64; 2]>>,
    matrix: OnceLock<DistanceMatrix>,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl PointSet {
    pub fn new(points: Vec<UnitVector>) -> Result<Self> {
        check_dimensions(&points)?;
        let mut points = points;
        points.sort_by(|a, b| lex(a.as_slice(), b.as_slice()));
        Ok(Self {
            points,
            projection: None,
            matrix: OnceLock::new(),
        })
    }

    /// `projection` must have one row of two coordinates per point.
    pub fn with_projection(points: Vec<UnitVector>, projection: Vec<Vec<f64>>) -> Result<Self> {
        check_dimensions(&points)?;
        let cols = projection
            .iter()
            .map(Vec::len)
            .find(|&c| c != 2)
            .unwrap_or(2);
        if projection.len() != points.len() || cols != 2 {
            return Err(Error::ProjectionShapeMismatch {
                rows: projection.len(),
                cols,
                expected: points.len(),
            });
        }
        let mut paired: Vec<(UnitVector, [f64; 2])> = points
            .into_iter()
            .zip(projection.into_iter().map(|r| [r[0], r[1]]))
            .collect();
        paired.sort_by(|a, b| lex(a.0.as_slice(), b.0.as_slice()).then_with(|| lex(&a.1, &b.1)));
        let (points, proj): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        Ok(Self {
            points,
            projection: Some(proj),
            matrix: OnceLock::new(),
        })
    }

    /// The multiset `idx` of this set's points (with their projection rows).
    pub fn resample(&self, idx: &[usize]) -> Result<PointSet> {
        let points: Vec<UnitVector> = idx.iter().map(|&i| self.points[i].clone()).collect();
        match &self.projection {
            Some(p) => Self::with_projection(points, idx.iter().map(|&i| p[i].to_vec()).collect()),
            None => Self::new(points),
        }
    }

    pub fn points(&self) -> &[UnitVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        self.matrix.get_or_init(|| {
            pairwise_matrix(&self.points).expect("dimensions checked on construction")
        })
    }

    /// The supplied projection, or the top-two principal axes.
    pub fn projection(&self) -> Result<Vec<[f64; 2]>> {
        match &self.projection {
            Some(p) => Ok(p.clone()),
            None => pca_projection(&self.points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanConfig {
    #[serde(default = "SpanConfig::default_percentile")]
    pub percentile: f64,
}

impl SpanConfig {
    fn default_percentile() -> f64 {
        90.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.percentile > 0.0 && self.percentile <= 100.0) {
            return Err(Error::BadParams(format!(
                "span percentile must lie in (0, 100], got {}",
                self.percentile
            )));
        }
        Ok(())
    }
}

impl Default for SpanConfig {
    fn default() -> Self {
        Self { percentile: 90.0 }
    }
}

/// Percentile of the angular distances to the renormalized centroid.
pub fn span(points: &[UnitVector], config: &SpanConfig) -> Result<f64> {
    config.validate()?;
    let centroid = angular_mean(points)?;
    let d: Vec<f64> = points
        .iter()
        .map(|p| angle_between(p.as_slice(), centroid.as_slice()))
        .collect();
    span_from_distances(&d, config)
}

/// Span given precomputed distances to a centroid.
pub fn span_from_distances(distances: &[f64], config: &SpanConfig) -> Result<f64> {
    percentile(distances, config.percentile)
}

/// Entropy of a point set over its projection.
pub fn entropy(set: &PointSet, config: &EntropyConfig) -> Result<f64> {
    grid_entropy(&set.projection()?, config)
}

/// A scalar diversity score of a whole point set.
pub trait CollectiveMetric: Send + Sync {
    fn name(&self) -> &str;
    fn compute(&self, set: &PointSet) -> Result<f64>;
}

struct MatrixMetric {
    name: &'static str,
    f: fn(&DistanceMatrix) -> Result<f64>,
}

impl CollectiveMetric for MatrixMetric {
    fn name(&self) -> &str {
        self.name
    }
    fn compute(&self, set: &PointSet) -> Result<f64> {
        (self.f)(set.matrix())
    }
}

pub struct SpanMetric(pub SpanConfig);

impl CollectiveMetric for SpanMetric {
    fn name(&self) -> &str {
        "span"
    }
    fn compute(&self, set: &PointSet) -> Result<f64> {
        span(set.points(), &self.0)
    }
}

pub struct EntropyMetric(pub EntropyConfig);

impl CollectiveMetric for EntropyMetric {
    fn name(&self) -> &str {
        "entropy"
    }
    fn compute(&self, set: &PointSet) -> Result<f64> {
        entropy(set, &self.0)
    }
}

/// Collective metrics in registration order.
#[derive(Clone)]
pub struct MetricRegistry {
    order: Vec<String>,
    metrics: BTreeMap<String, Arc<dyn CollectiveMetric>>,
}

impl MetricRegistry {
    pub fn empty() -> Self {
        Self {
            order: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    /// The standard panel: remote_clique, chamfer, mst_dispersion, span,
    /// sparseness, entropy.
    pub fn standard(span: SpanConfig, entropy: EntropyConfig) -> Result<Self> {
        span.validate()?;
        entropy.validate()?;
        let mut r = Self::empty();
        r.register(Arc::new(MatrixMetric {
            name: "remote_clique",
            f: remote_clique,
        }));
        r.register(Arc::new(MatrixMetric {
            name: "chamfer",
            f: chamfer,
        }));
        r.register(Arc::new(MatrixMetric {
            name: "mst_dispersion",
            f: mst_dispersion,
        }));
        r.register(Arc::new(SpanMetric(span)));
        r.register(Arc::new(MatrixMetric {
            name: "sparseness",
            f: sparseness,
        }));
        r.register(Arc::new(EntropyMetric(entropy)));
        Ok(r)
    }

    /// Adds or replaces a metric; a replacement keeps its original position.
    pub fn register(&mut self, metric: Arc<dyn CollectiveMetric>) {
        let name = metric.name().to_string();
        if self.metrics.insert(name.clone(), metric).is_none() {
            self.order.push(name);
        }
    }

    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CollectiveMetric>> {
        self.metrics
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownName {
                kind: "metric",
                name: name.to_string(),
                known: self.order.join(", "),
            })
    }

    /// Every registered metric on `set`, in registration order.
    pub fn evaluate(&self, set: &PointSet) -> Result<Vec<(String, f64)>> {
        self.order
            .iter()
            .map(|n| Ok((n.clone(), self.metrics[n].compute(set)?)))
            .collect()
    }
}

impl Default for MetricRegistry {
    fn default() -> Self {
        Self::standard(SpanConfig::default(), EntropyConfig::default())
            .expect("default configs are valid")
    }
}
