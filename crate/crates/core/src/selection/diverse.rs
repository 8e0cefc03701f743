use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linkage::{cut_clusters, single_linkage};
use crate::error::{Error, Result};
use crate::geometry::{
    angle_between, check_dimensions, pairwise_matrix, DistanceMatrix, UnitVector,
};

/// Picks `n` spread-out points: cut the single-linkage dendrogram into `n`
/// clusters and from each cluster take the member whose nearest point outside
/// the cluster is farthest away (ties: smallest index).
///
/// Indices come back ordered by cluster, and clusters by their smallest member.
pub fn select_diverse(points: &[UnitVector], n: usize) -> Result<Vec<usize>> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            actual: points.len(),
        });
    }
    select_diverse_in(&pairwise_matrix(points)?, n)
}

/// [`select_diverse`] over a precomputed distance matrix.
pub fn select_diverse_in(matrix: &DistanceMatrix, n: usize) -> Result<Vec<usize>> {
    let total = matrix.len();
    if total < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            actual: total,
        });
    }
    if n < 2 || n > total {
        return Err(Error::BadN {
            n,
            available: total,
        });
    }
    let tree = single_linkage(matrix)?;
    let clusters = cut_clusters(&tree, n)?;
    let labels = &clusters.labels;

    // Distance from each point to the nearest point outside its cluster.
    let separation: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            (0..total)
                .filter(|&j| labels[j] != own)
                .map(|j| matrix.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    let mut chosen: Vec<Option<usize>> = vec![None; n];
    for i in 0..total {
        let slot = &mut chosen[labels[i]];
        match *slot {
            Some(best) if separation[i] <= separation[best] => {}
            _ => *slot = Some(i),
        }
    }
    Ok(chosen
        .into_iter()
        .map(|c| c.expect("every cluster is nonempty"))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepellerConfig {
    /// Exclusion radius around each prior ideation, in radians.
    #[serde(default = "RepellerConfig::default_delta")]
    pub delta: f64,
}

impl RepellerConfig {
    pub const DEFAULT_DELTA: f64 = 0.29;

    fn default_delta() -> f64 {
        Self::DEFAULT_DELTA
    }

    pub fn new(delta: f64) -> Result<Self> {
        let c = Self { delta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=std::f64::consts::PI).contains(&self.delta) {
            return Err(Error::BadParams(format!(
                "delta must lie in [0, π], got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

impl Default for RepellerConfig {
    fn default() -> Self {
        Self {
            delta: Self::DEFAULT_DELTA,
        }
    }
}

/// Indices of `points` lying at least `delta` from every repeller. A point at
/// exactly `delta` survives.
pub fn exclude_near(
    points: &[UnitVector],
    repellers: &[UnitVector],
    config: &RepellerConfig,
) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let dim = check_dimensions(points)?;
    if !repellers.is_empty() && check_dimensions(repellers)? != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: repellers[0].dimension(),
        });
    }
    let keep: Vec<bool> = points
        .par_iter()
        .map(|p| {
            repellers
                .iter()
                .all(|r| angle_between(p.as_slice(), r.as_slice()) >= config.delta)
        })
        .collect();
    Ok(keep
        .iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| i)
        .collect())
}

/// Diverse selection among the points that survive repeller exclusion, with
/// a fresh dendrogram over the survivors. Indices refer to `points`.
pub fn select_directed_away(
    points: &[UnitVector],
    repellers: &[UnitVector],
    n: usize,
    config: &RepellerConfig,
) -> Result<Vec<usize>> {
    config.validate()?;
    let survivors = exclude_near(points, repellers, config)?;
    if n < 2 || n > points.len() {
        return Err(Error::BadN {
            n,
            available: points.len(),
        });
    }
    if survivors.len() < n {
        return Err(Error::InsufficientSurvivors {
            survivors: survivors.len(),
            needed: n,
        });
    }
    let kept: Vec<UnitVector> = survivors.iter().map(|&i| points[i].clone()).collect();
    Ok(select_diverse(&kept, n)?
        .into_iter()
        .map(|k| survivors[k])
        .collect())
}

/// [`select_directed_away`] against a precomputed matrix over `points`; the
/// survivors' dendrogram is rebuilt from the corresponding submatrix.
pub fn select_directed_away_in(
    points: &[UnitVector],
    matrix: &DistanceMatrix,
    repellers: &[UnitVector],
    n: usize,
    config: &RepellerConfig,
) -> Result<Vec<usize>> {
    config.validate()?;
    let survivors = exclude_near(points, repellers, config)?;
    if n < 2 || n > points.len() {
        return Err(Error::BadN {
            n,
            available: points.len(),
        });
    }
    if survivors.len() < n {
        return Err(Error::InsufficientSurvivors {
            survivors: survivors.len(),
            needed: n,
        });
    }
    let sub = if survivors.len() == matrix.len() {
        matrix.clone()
    } else {
        matrix.submatrix(&survivors)
    };
    Ok(select_diverse_in(&sub, n)?
        .into_iter()
        .map(|k| survivors[k])
        .collect())
}
