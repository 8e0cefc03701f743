//! Seeded sweeps over selection technique, prompt count, prompt size and
//! repeller count, summarizing the collective metrics of the selected prompts.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{load_embedded, PhraseRecord};
use crate::error::{Error, Result};
use crate::geometry::{check_dimensions, normalize, UnitVector};
use crate::io::csv_field;
use crate::metrics::{MetricRegistry, PointSet, SCHEMA_LINE};
use crate::selection::{CandidatePool, RepellerConfig, SelectionRequest, SelectorRegistry};

pub const SWEEP_HEADER: &str =
    "technique,prompt_count,prompt_size,repeller_count,metric,mean,sd,repeats";

/// Parameters for [`make_synthetic_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticCorpus {
    pub n_points: usize,
    pub n_clusters: usize,
    pub dimension: usize,
    pub concentration: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "SimulationConfig::default_techniques")]
    pub techniques: Vec<String>,
    #[serde(default = "SimulationConfig::default_counts")]
    pub prompt_counts: Vec<usize>,
    #[serde(default = "SimulationConfig::default_sizes")]
    pub prompt_sizes: Vec<usize>,
    /// Repeller counts beyond the implicit 0; only directed techniques use them.
    #[serde(default)]
    pub repeller_counts: Vec<usize>,
    #[serde(default = "SimulationConfig::default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    /// Prior ideations: reported as technique `none` and drawn on for repellers.
    #[serde(default)]
    pub none_baseline_path: Option<PathBuf>,
    #[serde(default = "SimulationConfig::default_delta")]
    pub repeller_delta: f64,
    /// Corpus to generate when no corpus file is given.
    #[serde(default)]
    pub synthetic: Option<SyntheticCorpus>,
}

impl SimulationConfig {
    fn default_techniques() -> Vec<String> {
        vec!["random".into(), "directed".into()]
    }
    fn default_counts() -> Vec<usize> {
        (0..10).map(|k| 50 + 100 * k).collect()
    }
    fn default_sizes() -> Vec<usize> {
        (1..=5).collect()
    }
    fn default_repeats() -> usize {
        50
    }
    fn default_delta() -> f64 {
        RepellerConfig::DEFAULT_DELTA
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParams(m));
        if self.techniques.is_empty() {
            return bad("no techniques configured".into());
        }
        if self.prompt_counts.is_empty() || self.prompt_counts.contains(&0) {
            return bad("prompt_counts must be nonempty and positive".into());
        }
        if self.prompt_sizes.is_empty() || self.prompt_sizes.iter().any(|g| !(1..=5).contains(g)) {
            return bad("prompt_sizes must be nonempty and within 1..=5".into());
        }
        if self.repeller_counts.contains(&0) {
            return bad("repeller_counts must be positive (0 is always included)".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if !self.repeller_counts.is_empty() && self.none_baseline_path.is_none() {
            return bad("repeller_counts need none_baseline_path".into());
        }
        RepellerConfig::new(self.repeller_delta)?;
        Ok(())
    }

    /// Prior-ideation embeddings, when configured.
    pub fn load_baseline(&self) -> Result<Option<Vec<UnitVector>>> {
        self.none_baseline_path
            .as_deref()
            .map(|p| Ok(load_embedded(p)?.1))
            .transpose()
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            techniques: Self::default_techniques(),
            prompt_counts: Self::default_counts(),
            prompt_sizes: Self::default_sizes(),
            repeller_counts: Vec::new(),
            repeats: Self::default_repeats(),
            seed: 0,
            none_baseline_path: None,
            repeller_delta: RepellerConfig::DEFAULT_DELTA,
            synthetic: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub technique: String,
    pub prompt_count: usize,
    pub prompt_size: usize,
    pub repeller_count: usize,
    pub metric: String,
    pub mean: f64,
    pub sd: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{SCHEMA_LINE}\n{SWEEP_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_field(&r.technique),
                r.prompt_count,
                r.prompt_size,
                r.repeller_count,
                csv_field(&r.metric),
                r.mean,
                r.sd,
                r.repeats
            );
        }
        out
    }

    /// Rows matching one configuration and metric.
    pub fn find(
        &self,
        technique: &str,
        n: usize,
        g: usize,
        n_r: usize,
        metric: &str,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.technique == technique
                && r.prompt_count == n
                && r.prompt_size == g
                && r.repeller_count == n_r
                && r.metric == metric
        })
    }
}

#[derive(Debug, Clone)]
struct Cell {
    technique: String,
    n: usize,
    g: usize,
    n_r: usize,
}

impl Cell {
    /// Seed for this configuration, independent of which other
    /// configurations are in the sweep.
    fn seed(&self, base: u64) -> u64 {
        let mut h = Sha256::new();
        h.update(base.to_le_bytes());
        h.update(self.technique.as_bytes());
        h.update([0u8]);
        for x in [self.n, self.g, self.n_r] {
            h.update((x as u64).to_le_bytes());
        }
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 8 bytes"))
    }
}

/// Sweep with the standard selectors and metric panel, reading the baseline
/// from `config.none_baseline_path` if set.
pub fn run_sweep(config: &SimulationConfig, corpus: &[UnitVector]) -> Result<SweepResult> {
    config.validate()?;
    let baseline = config.load_baseline()?;
    run_sweep_with(
        config,
        corpus,
        baseline.as_deref(),
        &SelectorRegistry::default(),
        &MetricRegistry::default(),
    )
}

pub fn run_sweep_with(
    config: &SimulationConfig,
    corpus: &[UnitVector],
    baseline: Option<&[UnitVector]>,
    selectors: &SelectorRegistry,
    metrics: &MetricRegistry,
) -> Result<SweepResult> {
    config.validate()?;
    check_dimensions(corpus)?;
    let max_n = *config
        .prompt_counts
        .iter()
        .max()
        .expect("validated nonempty");
    let max_g = *config
        .prompt_sizes
        .iter()
        .max()
        .expect("validated nonempty");
    if corpus.len() < max_n * max_g {
        return Err(Error::CorpusTooSmall {
            available: corpus.len(),
            needed: max_n * max_g,
        });
    }
    let baseline = baseline.filter(|b| !b.is_empty());
    if let Some(&too_many) = config
        .repeller_counts
        .iter()
        .find(|&&r| r > baseline.map_or(0, <[_]>::len))
    {
        return Err(Error::BadParams(format!(
            "repeller count {too_many} exceeds the {} baseline ideations",
            baseline.map_or(0, <[_]>::len)
        )));
    }
    let repeller = RepellerConfig::new(config.repeller_delta)?;

    let mut techniques = Vec::new();
    let mut seen = HashSet::new();
    for t in &config.techniques {
        if seen.insert(t.as_str()) {
            techniques.push(selectors.get(t)?);
        }
    }

    let mut cells = Vec::new();
    for t in &techniques {
        let directed = !t.is_stochastic(&SelectionRequest::new(1, 1));
        let repeller_axis: Vec<usize> = if directed {
            std::iter::once(0)
                .chain(config.repeller_counts.iter().copied())
                .collect()
        } else {
            vec![0]
        };
        for &n in &config.prompt_counts {
            for &g in &config.prompt_sizes {
                for &n_r in &repeller_axis {
                    cells.push(Cell {
                        technique: t.name().to_string(),
                        n,
                        g,
                        n_r,
                    });
                }
            }
        }
    }

    let pool = CandidatePool::new(corpus.to_vec())?;
    let empty: &[UnitVector] = &[];
    let baseline_points = baseline.unwrap_or(empty);

    let evaluate_cell = |cell: &Cell| -> Result<Vec<(String, Vec<f64>)>> {
        let selector = selectors.get(&cell.technique)?;
        let fixed =
            cell.n_r == 0 && !selector.is_stochastic(&SelectionRequest::new(cell.n, cell.g));
        let runs = if fixed { 1 } else { config.repeats };
        let base = cell.seed(config.seed);
        let per_run: Vec<Vec<(String, f64)>> = (0..runs)
            .into_par_iter()
            .map(|rep| {
                let mut rng = ChaCha8Rng::seed_from_u64(base);
                rng.set_stream(rep as u64);
                let repellers: Vec<UnitVector> = if cell.n_r > 0 {
                    rand::seq::index::sample(&mut rng, baseline_points.len(), cell.n_r)
                        .into_iter()
                        .map(|i| baseline_points[i].clone())
                        .collect()
                } else {
                    Vec::new()
                };
                let request =
                    SelectionRequest::new(cell.n, cell.g).with_repellers(&repellers, repeller);
                let prompts = selector.select(&pool, &request, &mut rng)?;
                let set = PointSet::new(prompts.into_iter().map(|p| p.embedding).collect())?;
                metrics.evaluate(&set)
            })
            .collect::<Result<_>>()?;
        let mut by_metric: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for run in per_run {
            for (name, v) in run {
                by_metric.entry(name).or_default().push(v);
            }
        }
        Ok(by_metric.into_iter().collect())
    };

    let results = cells
        .par_iter()
        .map(evaluate_cell)
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (cell, per_metric) in cells.iter().zip(results) {
        for (metric, values) in per_metric {
            let (mean, sd) = if values.len() == 1 {
                (values[0], 0.0)
            } else {
                mean_sd(&values)
            };
            rows.push(SweepRow {
                technique: cell.technique.clone(),
                prompt_count: cell.n,
                prompt_size: cell.g,
                repeller_count: cell.n_r,
                metric,
                mean,
                sd,
                // runs actually performed; deterministic cells run once
                repeats: values.len(),
            });
        }
    }
    if let Some(b) = baseline {
        for r in none_baseline_metrics_with(b, metrics)? {
            rows.push(r);
        }
    }
    rows.sort_by(|a, b| {
        (
            &a.technique,
            a.prompt_count,
            a.prompt_size,
            a.repeller_count,
            &a.metric,
        )
            .cmp(&(
                &b.technique,
                b.prompt_count,
                b.prompt_size,
                b.repeller_count,
                &b.metric,
            ))
    });
    Ok(SweepResult { rows })
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// The collective panel over prior ideations, as technique `none` rows
/// (prompt_count = number of ideations, one repeat).
pub fn none_baseline_metrics(ideations: &[UnitVector]) -> Result<Vec<SweepRow>> {
    none_baseline_metrics_with(ideations, &MetricRegistry::default())
}

pub fn none_baseline_metrics_with(
    ideations: &[UnitVector],
    metrics: &MetricRegistry,
) -> Result<Vec<SweepRow>> {
    if ideations.is_empty() {
        return Err(Error::EmptyInput("no baseline ideations".into()));
    }
    let set = PointSet::new(ideations.to_vec())?;
    Ok(metrics
        .evaluate(&set)?
        .into_iter()
        .map(|(metric, value)| SweepRow {
            technique: "none".into(),
            prompt_count: ideations.len(),
            prompt_size: 1,
            repeller_count: 0,
            metric,
            mean: value,
            sd: 0.0,
            repeats: 1,
        })
        .collect())
}

/// Unit vectors scattered around `n_clusters` random centers. Each offset
/// has i.i.d. normal components of variance `1 / (concentration · dimension)`,
/// so the typical angle to the center is about `atan(1/√concentration)`.
/// Point `k` belongs to cluster `k mod n_clusters`.
pub fn make_synthetic_corpus(params: &SyntheticCorpus) -> Result<Vec<UnitVector>> {
    let SyntheticCorpus {
        n_points,
        n_clusters,
        dimension,
        concentration,
        seed,
    } = *params;
    if n_points == 0 || n_clusters == 0 || n_clusters > n_points {
        return Err(Error::BadParams(format!(
            "need 1 <= n_clusters ({n_clusters}) <= n_points ({n_points})"
        )));
    }
    if dimension < 2 {
        return Err(Error::BadParams("dimension must be at least 2".into()));
    }
    if !concentration.is_finite() || concentration <= 0.0 {
        return Err(Error::BadParams(
            "concentration must be positive and finite".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<UnitVector> = (0..n_clusters)
        .map(|_| random_unit(&mut rng, dimension))
        .collect();
    let sigma = (1.0 / (concentration * dimension as f64)).sqrt();
    let mut out = Vec::with_capacity(n_points);
    while out.len() < n_points {
        let c = &centers[out.len() % n_clusters];
        let raw: Vec<f64> = c
            .as_slice()
            .iter()
            .map(|x| {
                let z: f64 = StandardNormal.sample(&mut rng);
                x + sigma * z
            })
            .collect();
        if let Ok(v) = normalize(&raw) {
            out.push(v);
        }
    }
    Ok(out)
}

fn random_unit(rng: &mut impl Rng, dimension: usize) -> UnitVector {
    loop {
        let raw: Vec<f64> = (0..dimension)
            .map(|_| -> f64 { StandardNormal.sample(&mut *rng) })
            .collect();
        if let Ok(v) = normalize(&raw) {
            return v;
        }
    }
}

/// Synthetic vectors as corpus records (`syn00000`, ...).
pub fn synthetic_records(vectors: &[UnitVector]) -> Vec<PhraseRecord> {
    vectors
        .iter()
        .enumerate()
        .map(|(k, v)| PhraseRecord {
            id: format!("syn{k:05}"),
            text: format!("synthetic point {k}"),
            source: Some("synthetic".into()),
            embedding: Some(v.clone()),
        })
        .collect()
}
