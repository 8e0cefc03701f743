use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::UnitVector;
use crate::io::write_atomic;

/// Content-addressed store of unit embeddings: one JSON array per file,
/// named by the hex SHA-256 of the UTF-8 text.
#[derive(Debug, Clone)]
pub struct EmbeddingCache {
    dir: PathBuf,
}

impl EmbeddingCache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn key(text: &str) -> String {
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path_for(&self, text: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(text)))
    }

    /// A cached vector of the expected dimension, if present and readable.
    /// Unreadable entries count as misses and get overwritten.
    pub fn get(&self, text: &str, dimension: usize) -> Option<UnitVector> {
        let bytes = std::fs::read(self.path_for(text)).ok()?;
        match serde_json::from_slice::<UnitVector>(&bytes) {
            Ok(v) if v.dimension() == dimension => Some(v),
            Ok(_) => None,
            Err(e) => {
                log::warn!(
                    "ignoring unreadable cache entry for key {}: {e}",
                    Self::key(text)
                );
                None
            }
        }
    }

    /// Writes are atomic renames, so concurrent writers of the same key
    /// leave one complete entry.
    pub fn put(&self, text: &str, vector: &UnitVector) -> Result<()> {
        let bytes = serde_json::to_vec(vector).expect("vector serializes");
        write_atomic(&self.path_for(text), &bytes)
    }
}
