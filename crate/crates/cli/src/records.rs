//! Loosely typed JSONL records, so each command accepts the output of the
//! one before it.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use dispersive_core::geometry::UnitVector;
use dispersive_core::io::read_jsonl_numbered;
use dispersive_core::Error;

/// Any embedded record: a phrase, a prompt or an ideation.
#[derive(Debug, Clone, Deserialize)]
pub struct AnyRecord {
    pub id: String,
    #[serde(default)]
    pub text: Option<String>,
    #[serde(default)]
    pub embedding: Option<UnitVector>,
    #[serde(default)]
    pub phrase_ids: Option<Vec<String>>,
    #[serde(default)]
    pub phrases: Option<Vec<String>>,
    #[serde(default)]
    pub prompt_id: Option<String>,
    #[serde(default)]
    pub elapsed_seconds: Option<f64>,
    #[serde(skip)]
    pub line: usize,
}

pub fn load_records(path: &Path) -> Result<Vec<AnyRecord>> {
    let raw: Vec<(usize, AnyRecord)> = read_jsonl_numbered(path)?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for (line, mut r) in raw {
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateId(r.id))
                .with_context(|| format!("{}:{line}", path.display()));
        }
        r.line = line;
        out.push(r);
    }
    Ok(out)
}

/// Ids and embeddings; every record must carry an embedding.
pub fn embedded(path: &Path, records: &[AnyRecord]) -> Result<(Vec<String>, Vec<UnitVector>)> {
    let mut ids = Vec::with_capacity(records.len());
    let mut vs = Vec::with_capacity(records.len());
    for r in records {
        let v = r
            .embedding
            .clone()
            .ok_or_else(|| Error::MissingEmbedding { id: r.id.clone() })
            .with_context(|| format!("{}:{}", path.display(), r.line))?;
        ids.push(r.id.clone());
        vs.push(v);
    }
    if vs.is_empty() {
        return Err(Error::EmptyInput(format!("{} has no records", path.display())).into());
    }
    Ok((ids, vs))
}

pub fn load_embedded(path: &Path) -> Result<(Vec<AnyRecord>, Vec<UnitVector>)> {
    let records = load_records(path)?;
    let (_, vs) = embedded(path, &records)?;
    Ok((records, vs))
}

/// A selected prompt as written by `select` and `avoid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub id: String,
    pub text: String,
    pub phrase_ids: Vec<String>,
    pub phrases: Vec<String>,
    pub embedding: UnitVector,
}
