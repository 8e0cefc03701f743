use std::collections::HashMap;

use serde::Deserialize;

use super::{EmbeddingBackend, ProviderConfig};
use crate::error::{Error, Result};
use crate::io::read_jsonl;

#[derive(Deserialize)]
struct Entry {
    text: String,
    embedding: Vec<f64>,
}

/// Precomputed vectors from a JSON-lines file of `{"text", "embedding"}`.
/// Later lines win when a text repeats.
#[derive(Debug, Clone)]
pub struct FileBackend {
    vectors: HashMap<String, Vec<f64>>,
}

impl FileBackend {
    pub fn from_config(config: &ProviderConfig) -> Result<Self> {
        let path = config
            .file_path
            .as_deref()
            .ok_or_else(|| Error::BadParams("mode `file` requires file_path".into()))?;
        let entries: Vec<Entry> = read_jsonl(path)?;
        Ok(Self {
            vectors: entries.into_iter().map(|e| (e.text, e.embedding)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl EmbeddingBackend for FileBackend {
    fn name(&self) -> &str {
        "file"
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>> {
        texts
            .iter()
            .map(|t| {
                self.vectors
                    .get(t)
                    .cloned()
                    .ok_or_else(|| Error::MissingText(t.clone()))
            })
            .collect()
    }
}
