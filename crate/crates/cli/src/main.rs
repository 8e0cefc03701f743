//! `dispersive`: filter, embed, select and score diverse prompts.

mod commands;
mod config;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "dispersive",
    version,
    about = "Diverse prompt selection over embedded phrase corpora"
)]
struct Cli {
    /// Settings file (TOML) with optional [filter], [provider], [repeller],
    /// [entropy], [span] and [simulation] sections. Flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Keep candidate phrases that pass the length, dictionary and overlap rules.
    Filter(commands::filter::FilterArgs),
    /// Attach embeddings to every record of a JSONL file.
    Embed(commands::embed::EmbedArgs),
    /// Group phrases into prompts and select a diverse subset.
    Select(commands::select::SelectArgs),
    /// Like `select`, skipping prompts close to a session's ideations.
    Avoid(commands::select::AvoidArgs),
    /// Compute the metric panel of an embedded record set.
    Metrics(commands::metrics::MetricsArgs),
    /// Bootstrap one collective metric.
    Bootstrap(commands::metrics::BootstrapArgs),
    /// Run a seeded selection sweep.
    Simulate(commands::simulate::SimulateArgs),
    /// Manage an ideation session file.
    Session(SessionArgs),
    /// Serve deterministic stub embeddings over HTTP (for testing).
    #[command(hide = true)]
    StubServe(commands::embed::StubArgs),
}

#[derive(Debug, Args)]
struct SessionArgs {
    #[command(subcommand)]
    action: commands::session::SessionAction,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let settings = config::CliConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Filter(a) => commands::filter::run(a, &settings),
        Command::Embed(a) => commands::embed::run(a, &settings),
        Command::Select(a) => commands::select::run_select(a, &settings),
        Command::Avoid(a) => commands::select::run_avoid(a, &settings),
        Command::Metrics(a) => commands::metrics::run(a, &settings),
        Command::Bootstrap(a) => commands::metrics::run_bootstrap(a, &settings),
        Command::Simulate(a) => commands::simulate::run(a, &settings),
        Command::Session(s) => commands::session::run(s.action, &settings),
        Command::StubServe(a) => commands::embed::serve(a),
    }
}

/// 2 for environment failures (files, network, services), 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    let env_failure = err.chain().any(|cause| {
        cause
            .downcast_ref::<dispersive_core::Error>()
            .is_some_and(dispersive_core::Error::is_io)
            || cause.downcast_ref::<std::io::Error>().is_some()
    });
    if env_failure {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn one_line(err: &anyhow::Error) -> String {
    err.chain()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(": ")
}
