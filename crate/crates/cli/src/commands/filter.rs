use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use dispersive_core::corpus::{filter_phrases, load_phrases};
use dispersive_core::io::{csv_field, to_jsonl};
use dispersive_core::metrics::SCHEMA_LINE;

use super::write_out;
use crate::config::CliConfig;

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Candidate phrases (JSONL with id and text).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Wordlist, one word per line.
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// CSV of rejected ids and reasons.
    #[arg(long, value_name = "FILE")]
    rejects: Option<PathBuf>,
    #[arg(long)]
    min_words: Option<usize>,
    #[arg(long)]
    max_words: Option<usize>,
    /// Keep phrases contained in longer kept phrases.
    #[arg(long)]
    keep_overlaps: bool,
}

pub fn run(args: FilterArgs, settings: &CliConfig) -> Result<()> {
    let mut config = settings.filter.clone().unwrap_or_default();
    if let Some(d) = args.dict {
        config.dictionary_path = Some(d);
    }
    if let Some(m) = args.min_words {
        config.min_words = m;
    }
    if let Some(m) = args.max_words {
        config.max_words = m;
    }
    if args.keep_overlaps {
        config.remove_overlaps = false;
    }
    let outcome = filter_phrases(load_phrases(&args.input)?, &config)?;
    write_out(&args.out, to_jsonl(&outcome.kept))?;
    if let Some(path) = args.rejects {
        let mut csv = format!("{SCHEMA_LINE}\nid,reason\n");
        for (id, why) in &outcome.rejections {
            let _ = writeln!(csv, "{},{}", csv_field(id), why);
        }
        write_out(&path, csv)?;
    }
    log::info!(
        "kept {} of {}",
        outcome.kept.len(),
        outcome.kept.len() + outcome.rejections.len()
    );
    Ok(())
}
