use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use rand_chacha::rand_core::SeedableRng;

use dispersive_core::corpus::Session;
use dispersive_core::geometry::UnitVector;
use dispersive_core::io::to_jsonl;
use dispersive_core::selection::{
    CandidatePool, PromptGroup, RepellerConfig, SelectionRequest, SelectorRegistry,
};
use dispersive_core::Error;

use super::write_out;
use crate::config::CliConfig;
use crate::records::{load_embedded, AnyRecord, PromptRecord};

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Embedded phrases (JSONL).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Number of prompts.
    #[arg(long)]
    n: usize,
    /// Phrases per prompt.
    #[arg(long, default_value_t = 1)]
    g: usize,
    /// Selection technique (`directed` or `random`).
    #[arg(long, default_value = "directed")]
    technique: String,
    /// Seed for stochastic techniques.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AvoidArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Session of prior ideations (JSONL, embedded).
    #[arg(long, value_name = "FILE")]
    session: PathBuf,
    /// Exclusion radius in radians (default 0.29).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

pub fn run_select(args: SelectArgs, _settings: &CliConfig) -> Result<()> {
    let (records, vectors) = load_embedded(&args.input)?;
    let prompts = pick(
        &records,
        vectors,
        &args.technique,
        SelectionRequest::new(args.n, args.g),
        args.seed,
    )?;
    write_out(&args.out, to_jsonl(&prompts))
}

pub fn run_avoid(args: AvoidArgs, settings: &CliConfig) -> Result<()> {
    let mut repeller = settings.repeller.unwrap_or_default();
    if let Some(d) = args.delta {
        repeller = RepellerConfig::new(d)?;
    }
    repeller.validate()?;
    let session = Session::load(&args.session)?;
    let repellers: Vec<UnitVector> = session
        .ideations()
        .iter()
        .map(|r| {
            r.embedding
                .clone()
                .ok_or_else(|| Error::MissingEmbedding { id: r.id.clone() })
        })
        .collect::<Result<_, _>>()
        .with_context(|| args.session.display().to_string())?;
    let (records, vectors) = load_embedded(&args.input)?;
    let request = SelectionRequest::new(args.n, args.g).with_repellers(&repellers, repeller);
    let prompts = pick(&records, vectors, "directed", request, 0)?;
    write_out(&args.out, to_jsonl(&prompts))
}

fn pick(
    records: &[AnyRecord],
    vectors: Vec<UnitVector>,
    technique: &str,
    request: SelectionRequest<'_>,
    seed: u64,
) -> Result<Vec<PromptRecord>> {
    let selector = SelectorRegistry::default().get(technique)?;
    let pool = CandidatePool::new(vectors)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let groups = selector.select(&pool, &request, &mut rng)?;
    Ok(groups
        .iter()
        .enumerate()
        .map(|(k, g)| prompt_record(k, g, records))
        .collect())
}

fn prompt_record(k: usize, group: &PromptGroup, records: &[AnyRecord]) -> PromptRecord {
    let phrases: Vec<String> = group
        .members
        .iter()
        .map(|&i| {
            records[i]
                .text
                .clone()
                .unwrap_or_else(|| records[i].id.clone())
        })
        .collect();
    PromptRecord {
        id: format!("p{k:04}"),
        text: phrases.join("; "),
        phrase_ids: group
            .members
            .iter()
            .map(|&i| records[i].id.clone())
            .collect(),
        phrases,
        embedding: group.embedding.clone(),
    }
}
