use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("vector sum is degenerate (norm {norm:e}); inputs cancel out")]
    DegenerateSum { norm: f64 },
    #[error("too few points: need at least {needed}, got {actual}")]
    TooFewPoints { needed: usize, actual: usize },
    #[error("invalid cluster count k={k} for {n} points")]
    BadK { k: usize, n: usize },
    #[error(
        "invalid selection size n={n} for {available} candidates (need 2 <= n <= {available})"
    )]
    BadN { n: usize, available: usize },
    #[error("invalid prompt size g={g} for {available} points")]
    BadG { g: usize, available: usize },
    #[error("only {survivors} candidates survive repeller exclusion, {needed} requested")]
    InsufficientSurvivors { survivors: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("corpus too small: {available} points, configuration needs {needed}")]
    CorpusTooSmall { available: usize, needed: usize },
    #[error("projection has shape {rows}x{cols}, expected {expected}x2")]
    ProjectionShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("record `{id}` references unknown prompt `{prompt_id}`")]
    UnresolvedPrompt { id: String, prompt_id: String },
    #[error("record `{id}` has no embedding")]
    MissingEmbedding { id: String },
    #[error("dictionary {path} unreadable: {source}")]
    DictionaryUnreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: corrupt record: {message}")]
    CorruptRecord {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("file is locked by another writer: {0}")]
    Locked(PathBuf),
    #[error("no embedding available for text {0:?}")]
    MissingText(String),
    #[error("embedding service unavailable after {attempts} attempts: {message}")]
    ServiceUnavailable { attempts: usize, message: String },
    #[error("malformed embedding service response: {0}")]
    MalformedResponse(String),
}

impl Error {
    /// True for failures caused by the environment (files, network, services)
    /// rather than by invalid input or parameters.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::DictionaryUnreadable { .. }
                | Error::Locked(_)
                | Error::ServiceUnavailable { .. }
                | Error::MalformedResponse(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
