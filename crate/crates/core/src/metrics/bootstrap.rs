//! Resampling uncertainty for collective metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::collective::{CollectiveMetric, PointSet};
use crate::error::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 50;

/// `samples` bootstrap replicates of `metric` over `set`. Replicate `k` draws
/// its indices from a generator seeded by `seed` on stream `k`, so values do
/// not depend on scheduling.
pub fn bootstrap(
    set: &PointSet,
    metric: &dyn CollectiveMetric,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::BadParams(
            "bootstrap needs at least one sample".into(),
        ));
    }
    let n = set.len();
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            metric.compute(&set.resample(&idx)?)
        })
        .collect()
}
