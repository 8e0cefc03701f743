//! Embedding acquisition.
//!
//! Texts are embedded by a named [`EmbeddingBackend`] (`file` or `http`),
//! re-normalized locally, and memoized in an optional on-disk cache keyed by
//! the SHA-256 of the text. The cache key ignores the backend identity, so a
//! cache directory must not be shared between different embedding models.

mod cache;
mod file;
mod http;
pub mod stub;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use cache::EmbeddingCache;
pub use file::FileBackend;
pub use http::HttpBackend;

use crate::error::{Error, Result};
use crate::geometry::{normalize, UnitVector};

/// Environment variable that replaces `endpoint_url` when set.
pub const ENDPOINT_ENV: &str = "DISPERSIVE_EMBED_URL";
pub const DEFAULT_CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub mode: String,
    #[serde(default)]
    pub file_path: Option<PathBuf>,
    #[serde(default)]
    pub endpoint_url: Option<String>,
    pub expected_dimension: usize,
    #[serde(default = "ProviderConfig::default_timeout")]
    pub timeout_seconds: f64,
    #[serde(default = "ProviderConfig::default_retries")]
    pub max_retries: usize,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// First retry delay; later retries double it.
    #[serde(default = "ProviderConfig::default_backoff")]
    pub backoff_seconds: f64,
    #[serde(default = "ProviderConfig::default_chunk")]
    pub chunk_size: usize,
}

impl ProviderConfig {
    fn default_timeout() -> f64 {
        30.0
    }
    fn default_retries() -> usize {
        3
    }
    fn default_backoff() -> f64 {
        1.0
    }
    fn default_chunk() -> usize {
        DEFAULT_CHUNK
    }

    pub fn file(path: impl Into<PathBuf>, expected_dimension: usize) -> Self {
        Self {
            mode: "file".into(),
            file_path: Some(path.into()),
            ..Self::http("", expected_dimension)
        }
    }

    pub fn http(url: impl Into<String>, expected_dimension: usize) -> Self {
        Self {
            mode: "http".into(),
            file_path: None,
            endpoint_url: Some(url.into()),
            expected_dimension,
            timeout_seconds: Self::default_timeout(),
            max_retries: Self::default_retries(),
            cache_dir: None,
            backoff_seconds: Self::default_backoff(),
            chunk_size: DEFAULT_CHUNK,
        }
    }

    /// Applies [`ENDPOINT_ENV`] if it is set and nonempty.
    pub fn apply_env(&mut self) {
        if let Ok(url) = std::env::var(ENDPOINT_ENV) {
            if !url.is_empty() {
                self.endpoint_url = Some(url);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.expected_dimension < 2 {
            return Err(Error::BadParams(
                "expected_dimension must be at least 2".into(),
            ));
        }
        if self.timeout_seconds.is_nan() || self.timeout_seconds <= 0.0 {
            return Err(Error::BadParams("timeout_seconds must be positive".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::BadParams("chunk_size must be positive".into()));
        }
        match self.mode.as_str() {
            "file" if self.file_path.is_none() => {
                Err(Error::BadParams("mode `file` requires file_path".into()))
            }
            "http" if self.endpoint_url.as_deref().is_none_or(str::is_empty) => {
                Err(Error::BadParams("mode `http` requires endpoint_url".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Texts paired with their unit embeddings, in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingBatch {
    pub texts: Vec<String>,
    pub vectors: Vec<UnitVector>,
}

/// A source of raw (not necessarily normalized) embedding vectors.
pub trait EmbeddingBackend: Send + Sync {
    fn name(&self) -> &str;

    /// One vector per text, order-aligned.
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>>;
}

type BackendFactory = fn(&ProviderConfig) -> Result<Box<dyn EmbeddingBackend>>;

/// Backend constructors keyed by `ProviderConfig::mode`.
pub struct BackendRegistry {
    factories: BTreeMap<String, BackendFactory>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, mode: &str, factory: BackendFactory) {
        self.factories.insert(mode.to_string(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn create(&self, config: &ProviderConfig) -> Result<Box<dyn EmbeddingBackend>> {
        let factory = self
            .factories
            .get(&config.mode)
            .ok_or_else(|| Error::UnknownName {
                kind: "provider mode",
                name: config.mode.clone(),
                known: self.names().join(", "),
            })?;
        factory(config)
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("file", |c| Ok(Box::new(FileBackend::from_config(c)?)));
        r.register("http", |c| Ok(Box::new(HttpBackend::from_config(c)?)));
        r
    }
}

/// A configured backend plus its cache.
pub struct Embedder {
    backend: Box<dyn EmbeddingBackend>,
    cache: Option<EmbeddingCache>,
    expected_dimension: usize,
    chunk_size: usize,
}

impl Embedder {
    pub fn new(config: &ProviderConfig) -> Result<Self> {
        Self::with_registry(config, &BackendRegistry::default())
    }

    pub fn with_registry(config: &ProviderConfig, registry: &BackendRegistry) -> Result<Self> {
        config.validate()?;
        let backend = registry.create(config)?;
        let cache = config
            .cache_dir
            .as_deref()
            .map(EmbeddingCache::open)
            .transpose()?;
        Ok(Self {
            backend,
            cache,
            expected_dimension: config.expected_dimension,
            chunk_size: config.chunk_size,
        })
    }

    pub fn embed_batch(&self, texts: &[String]) -> Result<EmbeddingBatch> {
        if texts.is_empty() {
            return Err(Error::EmptyInput("no texts to embed".into()));
        }
        let mut resolved: HashMap<&str, UnitVector> = HashMap::new();
        let mut misses: Vec<String> = Vec::new();
        let mut pending: HashSet<&str> = HashSet::new();
        for t in texts {
            if resolved.contains_key(t.as_str()) || !pending.insert(t.as_str()) {
                continue;
            }
            match self
                .cache
                .as_ref()
                .and_then(|c| c.get(t, self.expected_dimension))
            {
                Some(v) => {
                    resolved.insert(t, v);
                }
                None => misses.push(t.clone()),
            }
        }

        let mut fetched: HashMap<String, UnitVector> = HashMap::new();
        for chunk in misses.chunks(self.chunk_size) {
            let raw = self.backend.embed(chunk)?;
            if raw.len() != chunk.len() {
                return Err(Error::MalformedResponse(format!(
                    "{} vectors for {} texts",
                    raw.len(),
                    chunk.len()
                )));
            }
            for (text, v) in chunk.iter().zip(raw) {
                if v.len() != self.expected_dimension {
                    return Err(Error::DimensionMismatch {
                        expected: self.expected_dimension,
                        actual: v.len(),
                    });
                }
                let unit = normalize(&v)?;
                if let Some(cache) = &self.cache {
                    cache.put(text, &unit)?;
                }
                fetched.insert(text.clone(), unit);
            }
        }

        let vectors = texts
            .iter()
            .map(|t| {
                resolved
                    .get(t.as_str())
                    .or_else(|| fetched.get(t))
                    .cloned()
                    .expect("every text resolved")
            })
            .collect();
        Ok(EmbeddingBatch {
            texts: texts.to_vec(),
            vectors,
        })
    }
}

/// Embeds `texts` with a one-off [`Embedder`].
pub fn embed_batch(config: &ProviderConfig, texts: &[String]) -> Result<EmbeddingBatch> {
    Embedder::new(config)?.embed_batch(texts)
}
