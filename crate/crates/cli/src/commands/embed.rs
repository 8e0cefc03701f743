use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use serde_json::{Map, Value};

use dispersive_core::io::{read_jsonl_numbered, to_jsonl};
use dispersive_core::provider::stub::{StubOptions, StubServer};
use dispersive_core::provider::{Embedder, ProviderConfig};
use dispersive_core::Error;

use super::write_out;
use crate::config::{load_provider, CliConfig};

/// Provider selection shared by every command that embeds text.
#[derive(Debug, Clone, Default, Args)]
pub struct ProviderArgs {
    /// Provider file (TOML, ProviderConfig keys at top level).
    #[arg(long, value_name = "FILE")]
    provider: Option<PathBuf>,
    /// `file` or `http`.
    #[arg(long)]
    mode: Option<String>,
    /// Endpoint URL (http mode). DISPERSIVE_EMBED_URL overrides the
    /// configured URL but not this flag.
    #[arg(long)]
    url: Option<String>,
    /// Precomputed {text, embedding} JSONL (file mode).
    #[arg(long, value_name = "FILE")]
    embeddings_file: Option<PathBuf>,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
}

impl ProviderArgs {
    pub fn resolve(&self, settings: &CliConfig) -> Result<ProviderConfig> {
        let base = match &self.provider {
            Some(p) => Some(load_provider(p)?),
            None => settings.provider.clone(),
        };
        let mut config = match base {
            Some(c) => c,
            None => {
                let dim = self.dimension.ok_or_else(|| {
                    Error::BadParams(
                        "no provider configured; pass --provider or --dimension".into(),
                    )
                })?;
                let mut c = ProviderConfig::http("", dim);
                c.endpoint_url = None;
                c
            }
        };
        config.apply_env();
        if let Some(m) = &self.mode {
            config.mode = m.clone();
        }
        if let Some(u) = &self.url {
            config.endpoint_url = Some(u.clone());
        }
        if let Some(f) = &self.embeddings_file {
            config.file_path = Some(f.clone());
        }
        if let Some(d) = self.dimension {
            config.expected_dimension = d;
        }
        if let Some(c) = &self.cache_dir {
            config.cache_dir = Some(c.clone());
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// JSONL records with `id` and `text`; other fields are kept.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[command(flatten)]
    provider: ProviderArgs,
}

pub fn run(args: EmbedArgs, settings: &CliConfig) -> Result<()> {
    let config = args.provider.resolve(settings)?;
    let mut records: Vec<(usize, Map<String, Value>)> = read_jsonl_numbered(&args.input)?;
    let mut texts = Vec::with_capacity(records.len());
    for (line, r) in &records {
        let text = r.get("text").and_then(Value::as_str).ok_or_else(|| {
            anyhow!(
                "{}:{line}: record has no string `text`",
                args.input.display()
            )
        })?;
        texts.push(text.to_string());
    }
    let batch = Embedder::new(&config)?
        .embed_batch(&texts)
        .context("embedding")?;
    for ((_, r), v) in records.iter_mut().zip(batch.vectors) {
        r.insert("embedding".into(), serde_json::to_value(v)?);
    }
    let out: Vec<&Map<String, Value>> = records.iter().map(|(_, r)| r).collect();
    write_out(&args.out, to_jsonl(&out))
}

#[derive(Debug, Args)]
pub struct StubArgs {
    #[arg(long, default_value = "127.0.0.1:8089")]
    addr: String,
    #[arg(long, default_value_t = 16)]
    dimension: usize,
}

pub fn serve(args: StubArgs) -> Result<()> {
    let server = StubServer::bind(
        &args.addr,
        StubOptions {
            dimension: args.dimension,
            ..Default::default()
        },
    )?;
    println!("{}", server.url());
    server.join();
    Ok(())
}
