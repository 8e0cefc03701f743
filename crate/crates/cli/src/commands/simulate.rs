use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use dispersive_core::io::to_jsonl;
use dispersive_core::metrics::MetricRegistry;
use dispersive_core::selection::SelectorRegistry;
use dispersive_core::simulation::{make_synthetic_corpus, run_sweep_with, synthetic_records};
use dispersive_core::Error;

use super::write_out;
use crate::config::CliConfig;
use crate::records::load_embedded;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Embedded phrase corpus; without it the [simulation.synthetic] corpus is generated.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Override the configured repeat count.
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the synthetic corpus (JSONL).
    #[arg(long, value_name = "FILE")]
    save_corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

pub fn run(args: SimulateArgs, settings: &CliConfig) -> Result<()> {
    let mut config = settings.simulation.clone().unwrap_or_default();
    if let Some(r) = args.repeats {
        config.repeats = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.validate()?;
    let corpus = match (&args.input, &config.synthetic) {
        (Some(path), _) => load_embedded(path)?.1,
        (None, Some(params)) => {
            let vs = make_synthetic_corpus(params)?;
            if let Some(path) = &args.save_corpus {
                write_out(path, to_jsonl(&synthetic_records(&vs)))?;
            }
            vs
        }
        (None, None) => {
            return Err(Error::BadParams(
                "simulate needs --in or a [simulation.synthetic] section".into(),
            )
            .into())
        }
    };
    let metrics = MetricRegistry::standard(
        settings.span.unwrap_or_default(),
        settings.entropy.unwrap_or_default(),
    )?;
    let baseline = config.load_baseline()?;
    let result = run_sweep_with(
        &config,
        &corpus,
        baseline.as_deref(),
        &SelectorRegistry::default(),
        &metrics,
    )?;
    write_out(&args.out, result.to_csv())
}
