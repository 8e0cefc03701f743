//! Phrase and ideation records, phrase filtering, and ideation sessions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitVector;
use crate::io::{read_jsonl, read_jsonl_numbered, to_jsonl, write_atomic};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhraseRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<UnitVector>,
}

impl PhraseRecord {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            source: None,
            embedding: None,
        }
    }

    /// Number of whitespace-delimited tokens; hyphenated words count once.
    pub fn word_count(&self) -> usize {
        self.text.split_whitespace().count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdeationRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<UnitVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl IdeationRecord {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            prompt_id: None,
            embedding: None,
            elapsed_seconds: None,
        }
    }
}

/// Loads a phrase corpus, rejecting duplicate ids.
pub fn load_phrases(path: &Path) -> Result<Vec<PhraseRecord>> {
    let records: Vec<PhraseRecord> = read_jsonl(path)?;
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
    }
    Ok(records)
}

pub fn save_phrases(records: &[PhraseRecord], path: &Path) -> Result<()> {
    write_atomic(path, &to_jsonl(records))
}

/// Ids and embeddings of records that must all be embedded.
pub fn embedded_vectors(records: &[PhraseRecord]) -> Result<(Vec<String>, Vec<UnitVector>)> {
    records
        .iter()
        .map(|r| match &r.embedding {
            Some(e) => Ok((r.id.clone(), e.clone())),
            None => Err(Error::MissingEmbedding { id: r.id.clone() }),
        })
        .collect::<Result<Vec<_>>>()
        .map(|pairs| pairs.into_iter().unzip())
}

/// Loads any JSONL of `{id, text, embedding, ...}` records and returns the
/// ids and embeddings. Extra fields are ignored.
pub fn load_embedded(path: &Path) -> Result<(Vec<String>, Vec<UnitVector>)> {
    embedded_vectors(&load_phrases(path)?)
}

/// Lowercases a token and strips leading/trailing non-alphanumeric characters.
pub fn normalize_token(token: &str) -> String {
    token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

/// Normalized, non-empty tokens of `text`.
pub fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(normalize_token)
        .filter(|t| !t.is_empty())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(default = "FilterConfig::default_min")]
    pub min_words: usize,
    #[serde(default = "FilterConfig::default_max")]
    pub max_words: usize,
    #[serde(default)]
    pub dictionary_path: Option<PathBuf>,
    #[serde(default = "FilterConfig::default_overlaps")]
    pub remove_overlaps: bool,
}

impl FilterConfig {
    fn default_min() -> usize {
        3
    }
    fn default_max() -> usize {
        5
    }
    fn default_overlaps() -> bool {
        true
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_words < 1 || self.min_words > self.max_words {
            return Err(Error::BadParams(format!(
                "word bounds must satisfy 1 <= min_words <= max_words (got {}..{})",
                self.min_words, self.max_words
            )));
        }
        Ok(())
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_words: 3,
            max_words: 5,
            dictionary_path: None,
            remove_overlaps: true,
        }
    }
}

/// A lowercase wordlist.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    words: HashSet<String>,
}

impl Dictionary {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::DictionaryUnreadable {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_words(text.lines()))
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        let words = words
            .into_iter()
            .map(|w| w.trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        Self { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// A raw token is accepted when every hyphen-separated part of its
    /// normalized form is in the list.
    fn accepts_token(&self, raw: &str) -> bool {
        let token = normalize_token(raw);
        !token.is_empty()
            && token
                .split('-')
                .all(|part| !part.is_empty() && self.contains(part))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    TooShort,
    TooLong,
    NonDictionaryWord,
    OverlapOfLonger,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::TooShort => "too_short",
            RejectReason::TooLong => "too_long",
            RejectReason::NonDictionaryWord => "non_dictionary_word",
            RejectReason::OverlapOfLonger => "overlap_of_longer",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub kept: Vec<PhraseRecord>,
    pub rejections: Vec<(String, RejectReason)>,
}

/// Loads the configured dictionary and runs [`filter_with_dictionary`].
pub fn filter_phrases(
    candidates: Vec<PhraseRecord>,
    config: &FilterConfig,
) -> Result<FilterOutcome> {
    config.validate()?;
    let path = config
        .dictionary_path
        .as_deref()
        .ok_or_else(|| Error::BadParams("filter requires a dictionary path".into()))?;
    let dictionary = Dictionary::load(path)?;
    filter_with_dictionary(candidates, config, &dictionary)
}

/// Applies the length rule, then the dictionary rule, then (optionally) drops
/// phrases whose token sequence occurs contiguously inside a longer survivor.
/// Kept phrases and rejections both preserve input order.
pub fn filter_with_dictionary(
    candidates: Vec<PhraseRecord>,
    config: &FilterConfig,
    dictionary: &Dictionary,
) -> Result<FilterOutcome> {
    config.validate()?;
    let mut seen = HashSet::new();
    for c in &candidates {
        if !seen.insert(c.id.as_str()) {
            return Err(Error::DuplicateId(c.id.clone()));
        }
    }

    let mut verdicts: Vec<Option<RejectReason>> = candidates
        .iter()
        .map(|c| {
            let wc = c.word_count();
            if wc < config.min_words {
                Some(RejectReason::TooShort)
            } else if wc > config.max_words {
                Some(RejectReason::TooLong)
            } else if !c
                .text
                .split_whitespace()
                .all(|t| dictionary.accepts_token(t))
            {
                Some(RejectReason::NonDictionaryWord)
            } else {
                None
            }
        })
        .collect();

    if config.remove_overlaps {
        let sequences: Vec<Vec<String>> = candidates
            .iter()
            .map(|c| c.text.split_whitespace().map(normalize_token).collect())
            .collect();
        let survivors: Vec<usize> = (0..candidates.len())
            .filter(|&i| verdicts[i].is_none())
            .collect();

        // Every proper contiguous window of every survivor.
        let mut windows: HashSet<&[String]> = HashSet::new();
        for &i in &survivors {
            let seq = &sequences[i];
            for len in 1..seq.len() {
                windows.extend(seq.windows(len));
            }
        }
        // Exact duplicates: the smallest id keeps the sequence.
        let mut owner: HashMap<&[String], usize> = HashMap::new();
        for &i in &survivors {
            owner
                .entry(sequences[i].as_slice())
                .and_modify(|o| {
                    if candidates[i].id < candidates[*o].id {
                        *o = i;
                    }
                })
                .or_insert(i);
        }
        for &i in &survivors {
            let seq = sequences[i].as_slice();
            if windows.contains(seq) || owner[seq] != i {
                verdicts[i] = Some(RejectReason::OverlapOfLonger);
            }
        }
    }

    let mut outcome = FilterOutcome::default();
    for (c, verdict) in candidates.into_iter().zip(verdicts) {
        match verdict {
            None => outcome.kept.push(c),
            Some(reason) => outcome.rejections.push((c.id, reason)),
        }
    }
    Ok(outcome)
}

/// An append-only log of ideations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Session {
    pub session_id: String,
    ideations: Vec<IdeationRecord>,
    index: BTreeMap<String, usize>,
}

impl Session {
    pub fn new(session_id: impl Into<String>) -> Self {
        Self {
            session_id: session_id.into(),
            ..Default::default()
        }
    }

    pub fn ideations(&self) -> &[IdeationRecord] {
        &self.ideations
    }

    pub fn len(&self) -> usize {
        self.ideations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideations.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&IdeationRecord> {
        self.index.get(id).map(|&i| &self.ideations[i])
    }

    pub fn append(mut self, ideation: IdeationRecord) -> Result<Self> {
        self.push(ideation)?;
        Ok(self)
    }

    pub fn push(&mut self, ideation: IdeationRecord) -> Result<()> {
        if self.index.contains_key(&ideation.id) {
            return Err(Error::DuplicateId(ideation.id));
        }
        if let Some(t) = ideation.elapsed_seconds {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::BadParams(format!(
                    "ideation `{}`: elapsed_seconds must be positive, got {t}",
                    ideation.id
                )));
            }
        }
        self.index.insert(ideation.id.clone(), self.ideations.len());
        self.ideations.push(ideation);
        Ok(())
    }

    /// Checks that every `prompt_id` names one of `prompt_ids`.
    pub fn check_prompt_refs<'a>(
        &self,
        prompt_ids: impl IntoIterator<Item = &'a str>,
    ) -> Result<()> {
        let known: HashSet<&str> = prompt_ids.into_iter().collect();
        for r in &self.ideations {
            if let Some(p) = &r.prompt_id {
                if !known.contains(p.as_str()) {
                    return Err(Error::UnresolvedPrompt {
                        id: r.id.clone(),
                        prompt_id: p.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Reads a session file. A missing file is an error; an empty file is an
    /// empty session. The session id is the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut session = Session::new(id);
        let records: Vec<(usize, IdeationRecord)> = read_jsonl_numbered(path)?;
        for (line, r) in records {
            session.push(r).map_err(|e| Error::CorruptRecord {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
        }
        Ok(session)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, &to_jsonl(&self.ideations))
    }
}
