use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::Deserialize;

use dispersive_core::geometry::{pairwise_matrix, UnitVector};
use dispersive_core::io::read_jsonl_numbered;
use dispersive_core::metrics::{
    bootstrap, bootstrap_csv, collective_reports, flexibility, fluency, individual_reports,
    intra_prompt_mean, metrics_csv, originality, prompt_ideation_distance, prompt_phrase_chamfer,
    prompt_precision, prompt_recall, CodeLevel, MetricRegistry, MetricReport, PointSet,
    ThematicCodes, DEFAULT_SAMPLES,
};
use dispersive_core::Error;

use super::write_out;
use crate::config::CliConfig;
use crate::records::{load_embedded, load_records, AnyRecord};

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Any embedded records: phrases, prompts or ideations.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Thematic codes (JSONL of {id, categories, themes}).
    #[arg(long, value_name = "FILE")]
    codes: Option<PathBuf>,
    /// Prompts the ideations answered; adds recall, precision and distance.
    #[arg(long, value_name = "FILE")]
    prompts: Option<PathBuf>,
    /// Embedded phrases behind the input prompts; adds intra-prompt metrics.
    #[arg(long, value_name = "FILE")]
    phrases: Option<PathBuf>,
    /// 2-D coordinates for entropy (JSONL of {id, coords: [x, y]}).
    #[arg(long, value_name = "FILE")]
    projection: Option<PathBuf>,
    #[arg(long)]
    percentile: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Collective metric name.
    #[arg(long)]
    metric: String,
    /// Number of resamples.
    #[arg(long = "b", default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    projection: Option<PathBuf>,
    #[arg(long)]
    percentile: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

fn registry(
    settings: &CliConfig,
    percentile: Option<f64>,
    grid: Option<usize>,
) -> Result<MetricRegistry> {
    let mut span = settings.span.unwrap_or_default();
    let mut entropy = settings.entropy.unwrap_or_default();
    if let Some(p) = percentile {
        span.percentile = p;
    }
    if let Some(g) = grid {
        entropy.grid = g;
    }
    Ok(MetricRegistry::standard(span, entropy)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Coords {
    id: String,
    coords: Vec<f64>,
}

fn point_set(
    records: &[AnyRecord],
    vectors: Vec<UnitVector>,
    projection: Option<&Path>,
) -> Result<PointSet> {
    let Some(path) = projection else {
        return Ok(PointSet::new(vectors)?);
    };
    let rows: Vec<(usize, Coords)> = read_jsonl_numbered(path)?;
    let by_id: HashMap<&str, &Vec<f64>> = rows
        .iter()
        .map(|(_, c)| (c.id.as_str(), &c.coords))
        .collect();
    if rows.len() != records.len() {
        return Err(Error::ProjectionShapeMismatch {
            rows: rows.len(),
            cols: 2,
            expected: records.len(),
        }
        .into());
    }
    let matrix = records
        .iter()
        .map(|r| {
            by_id.get(r.id.as_str()).map(|c| c.to_vec()).ok_or_else(|| {
                Error::BadParams(format!("{}: no coordinates for `{}`", path.display(), r.id))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointSet::with_projection(vectors, matrix)?)
}

pub fn run(args: MetricsArgs, settings: &CliConfig) -> Result<()> {
    let registry = registry(settings, args.percentile, args.grid)?;
    let (records, vectors) = load_embedded(&args.input)?;
    let ids: Vec<String> = records.iter().map(|r| r.id.clone()).collect();

    let mut reports = individual_reports(&ids, &pairwise_matrix(&vectors)?)?;
    let set = point_set(&records, vectors.clone(), args.projection.as_deref())?;
    reports.extend(collective_reports(&set, &registry)?);

    if records.iter().all(|r| r.elapsed_seconds.is_some()) {
        let values = records
            .iter()
            .map(|r| fluency(r.elapsed_seconds.expect("checked")))
            .collect::<Result<Vec<_>, _>>()?;
        reports.push(MetricReport::individual("fluency", &ids, values)?);
    } else if records.iter().any(|r| r.elapsed_seconds.is_some()) {
        log::warn!("some records lack elapsed_seconds; fluency skipped");
    }

    if let Some(path) = &args.phrases {
        reports.extend(intra_prompt(&records, path).with_context(|| path.display().to_string())?);
    }
    if let Some(path) = &args.prompts {
        reports.extend(
            adoption(&records, &ids, &vectors, path).with_context(|| path.display().to_string())?,
        );
    }
    if let Some(path) = &args.codes {
        let codes = ThematicCodes::load(path)?;
        codes
            .check_ids(ids.iter().map(String::as_str))
            .with_context(|| path.display().to_string())?;
        for level in [CodeLevel::Category, CodeLevel::Theme] {
            reports.push(MetricReport::collective(
                format!("flexibility_{}", level.as_str()),
                flexibility(&codes, level) as f64,
            ));
            let o = originality(&codes, level, Some(records.len()))?;
            reports.push(MetricReport::collective(
                format!("originality_{}", level.as_str()),
                o.mean,
            ));
        }
    }
    write_out(&args.out, metrics_csv(&reports))
}

fn intra_prompt(prompts: &[AnyRecord], phrases_path: &Path) -> Result<Vec<MetricReport>> {
    let (phrases, vectors) = load_embedded(phrases_path)?;
    let index: HashMap<&str, usize> = phrases
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    let mut ids = Vec::new();
    let (mut means, mut chamfers) = (Vec::new(), Vec::new());
    for p in prompts {
        let members = p
            .phrase_ids
            .as_ref()
            .ok_or_else(|| Error::BadParams(format!("record `{}` has no phrase_ids", p.id)))?;
        let vs = members
            .iter()
            .map(|m| {
                index
                    .get(m.as_str())
                    .map(|&i| vectors[i].clone())
                    .ok_or_else(|| {
                        Error::BadParams(format!("prompt `{}` names unknown phrase `{m}`", p.id))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let local: Vec<usize> = (0..vs.len()).collect();
        let m = pairwise_matrix(&vs)?;
        means.push(intra_prompt_mean(&local, &m)?);
        chamfers.push(prompt_phrase_chamfer(&local, &m)?);
        ids.push(p.id.clone());
    }
    Ok(vec![
        MetricReport::individual("intra_prompt_mean", &ids, means)?,
        MetricReport::individual("prompt_phrase_chamfer", &ids, chamfers)?,
    ])
}

fn adoption(
    ideations: &[AnyRecord],
    ids: &[String],
    vectors: &[UnitVector],
    prompts_path: &Path,
) -> Result<Vec<MetricReport>> {
    let (prompts, prompt_vectors) = load_embedded(prompts_path)?;
    let index: HashMap<&str, usize> = prompts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    let (mut recall, mut precision, mut distance) = (Vec::new(), Vec::new(), Vec::new());
    for (r, v) in ideations.iter().zip(vectors) {
        let pid = r
            .prompt_id
            .as_deref()
            .ok_or_else(|| Error::BadParams(format!("ideation `{}` has no prompt_id", r.id)))?;
        let &k = index.get(pid).ok_or_else(|| Error::UnresolvedPrompt {
            id: r.id.clone(),
            prompt_id: pid.to_string(),
        })?;
        let text = r.text.as_deref().unwrap_or("");
        let p = &prompts[k];
        let phrases = match (&p.phrases, &p.text) {
            (Some(ph), _) => ph.clone(),
            (None, Some(t)) => vec![t.clone()],
            (None, None) => {
                return Err(Error::BadParams(format!("prompt `{}` has no text", p.id)).into())
            }
        };
        recall.push(prompt_recall(&phrases, text)?);
        precision.push(prompt_precision(&phrases, text)?);
        distance.push(prompt_ideation_distance(&prompt_vectors[k], v)?);
    }
    Ok(vec![
        MetricReport::individual("prompt_recall", ids, recall)?,
        MetricReport::individual("prompt_precision", ids, precision)?,
        MetricReport::individual("prompt_ideation_distance", ids, distance)?,
    ])
}

pub fn run_bootstrap(args: BootstrapArgs, settings: &CliConfig) -> Result<()> {
    let registry = registry(settings, args.percentile, args.grid)?;
    let metric = registry.get(&args.metric)?;
    let records = load_records(&args.input)?;
    let (_, vectors) = crate::records::embedded(&args.input, &records)?;
    let set = point_set(&records, vectors, args.projection.as_deref())?;
    let samples = bootstrap(&set, metric.as_ref(), args.samples, args.seed)?;
    let report = MetricReport::collective(args.metric.clone(), metric.compute(&set)?)
        .with_bootstrap(samples);
    write_out(&args.out, bootstrap_csv(&[report]))
}
