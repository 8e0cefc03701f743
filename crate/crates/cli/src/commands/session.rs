use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, Subcommand};

use dispersive_core::corpus::{IdeationRecord, Session};
use dispersive_core::geometry::normalize;
use dispersive_core::io::WriteLock;
use dispersive_core::provider::Embedder;

use super::embed::ProviderArgs;
use crate::config::CliConfig;

#[derive(Debug, Subcommand)]
pub enum SessionAction {
    /// Append one ideation. Creates the file if needed.
    Add(Box<AddArgs>),
    /// Print the session as tab-separated lines.
    List {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct AddArgs {
    #[arg(long, value_name = "FILE")]
    file: PathBuf,
    #[arg(long)]
    id: String,
    #[arg(long)]
    text: String,
    #[arg(long)]
    prompt_id: Option<String>,
    /// Seconds spent writing the ideation.
    #[arg(long)]
    elapsed: Option<f64>,
    /// Embedding as a JSON array (normalized on entry).
    #[arg(long, conflicts_with = "embed")]
    embedding: Option<String>,
    /// Embed the text with the configured provider.
    #[arg(long)]
    embed: bool,
    #[command(flatten)]
    provider: ProviderArgs,
}

fn load_or_new(path: &Path) -> Result<Session> {
    if path.exists() {
        Ok(Session::load(path)?)
    } else {
        Ok(Session::new(
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        ))
    }
}

pub fn run(action: SessionAction, settings: &CliConfig) -> Result<()> {
    match action {
        SessionAction::Add(args) => {
            let AddArgs {
                file,
                id,
                text,
                prompt_id,
                elapsed,
                embedding,
                embed,
                provider,
            } = *args;
            let vector = match (embedding, embed) {
                (Some(json), _) => {
                    let raw: Vec<f64> = serde_json::from_str(&json).map_err(|e| {
                        dispersive_core::Error::BadParams(format!("--embedding: {e}"))
                    })?;
                    Some(normalize(&raw)?)
                }
                (None, true) => {
                    let config = provider.resolve(settings)?;
                    let batch = Embedder::new(&config)?.embed_batch(std::slice::from_ref(&text))?;
                    batch.vectors.into_iter().next()
                }
                (None, false) => None,
            };
            let _lock = WriteLock::acquire(&file)?;
            let mut session = load_or_new(&file)?;
            let mut record = IdeationRecord::new(id, text);
            record.prompt_id = prompt_id;
            record.elapsed_seconds = elapsed;
            record.embedding = vector;
            session.push(record)?;
            session.save(&file)?;
            Ok(())
        }
        SessionAction::List { file } => {
            let session = Session::load(&file)?;
            let mut out = std::io::stdout().lock();
            for r in session.ideations() {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.id,
                    r.prompt_id.as_deref().unwrap_or("-"),
                    r.elapsed_seconds.map_or("-".to_string(), |t| t.to_string()),
                    if r.embedding.is_some() {
                        "embedded"
                    } else {
                        "-"
                    },
                    r.text.replace(['\t', '\n'], " ")
                )?;
            }
            Ok(())
        }
    }
}
