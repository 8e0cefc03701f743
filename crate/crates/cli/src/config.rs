//! The optional settings file (TOML). Every section is optional; unknown
//! keys are rejected. Relative paths are resolved against the file's directory.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use dispersive_core::corpus::FilterConfig;
use dispersive_core::metrics::{EntropyConfig, SpanConfig};
use dispersive_core::provider::ProviderConfig;
use dispersive_core::selection::RepellerConfig;
use dispersive_core::simulation::SimulationConfig;
use dispersive_core::Error;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub filter: Option<FilterConfig>,
    pub provider: Option<ProviderConfig>,
    pub repeller: Option<RepellerConfig>,
    pub entropy: Option<EntropyConfig>,
    pub span: Option<SpanConfig>,
    pub simulation: Option<SimulationConfig>,
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| {
        Error::BadParams(format!(
            "{}: {}",
            path.display(),
            e.to_string().trim_end().replace('\n', " ")
        ))
        .into()
    })
}

fn rebase(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let mut cfg: CliConfig = read_toml(path).with_context(|| "reading settings")?;
        let base = base_dir(path);
        if let Some(f) = &mut cfg.filter {
            rebase(&base, &mut f.dictionary_path);
        }
        if let Some(p) = &mut cfg.provider {
            rebase_provider(&base, p);
        }
        if let Some(s) = &mut cfg.simulation {
            rebase(&base, &mut s.none_baseline_path);
        }
        Ok(cfg)
    }
}

fn rebase_provider(base: &Path, p: &mut ProviderConfig) {
    rebase(base, &mut p.file_path);
    rebase(base, &mut p.cache_dir);
}

/// A standalone provider file: the `ProviderConfig` keys at top level.
pub fn load_provider(path: &Path) -> Result<ProviderConfig> {
    let mut p: ProviderConfig = read_toml(path)?;
    rebase_provider(&base_dir(path), &mut p);
    Ok(p)
}
