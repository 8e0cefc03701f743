//! Metrics over externally supplied thematic codes, plus the fluency transform.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_jsonl_numbered;

/// Codes attached to one message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageCodes {
    pub id: String,
    #[serde(default)]
    pub categories: Vec<String>,
    #[serde(default)]
    pub themes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeLevel {
    Category,
    Theme,
}

impl CodeLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeLevel::Category => "category",
            CodeLevel::Theme => "theme",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ThematicCodes {
    messages: Vec<MessageCodes>,
}

impl ThematicCodes {
    pub fn new(messages: Vec<MessageCodes>) -> Result<Self> {
        let mut seen = HashSet::new();
        for m in &messages {
            if !seen.insert(m.id.as_str()) {
                return Err(Error::DuplicateId(m.id.clone()));
            }
        }
        Ok(Self { messages })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let records: Vec<(usize, MessageCodes)> = read_jsonl_numbered(path)?;
        let mut seen = HashSet::new();
        for (line, m) in &records {
            if !seen.insert(m.id.clone()) {
                return Err(Error::CorruptRecord {
                    path: path.to_path_buf(),
                    line: *line,
                    message: format!("duplicate id {:?}", m.id),
                });
            }
        }
        Ok(Self {
            messages: records.into_iter().map(|(_, m)| m).collect(),
        })
    }

    pub fn messages(&self) -> &[MessageCodes] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Every coded message must belong to the evaluated set.
    pub fn check_ids<'a>(&self, evaluated: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let known: HashSet<&str> = evaluated.into_iter().collect();
        match self
            .messages
            .iter()
            .find(|m| !known.contains(m.id.as_str()))
        {
            Some(m) => Err(Error::BadParams(format!(
                "coded message {:?} is not in the evaluated set",
                m.id
            ))),
            None => Ok(()),
        }
    }

    fn labels(&self, level: CodeLevel) -> impl Iterator<Item = &str> {
        self.messages.iter().flat_map(move |m| {
            let labels = match level {
                CodeLevel::Category => &m.categories,
                CodeLevel::Theme => &m.themes,
            };
            // A label repeated within one message counts once.
            labels.iter().map(String::as_str).collect::<BTreeSet<_>>()
        })
    }

    /// Number of messages carrying each label.
    pub fn frequencies(&self, level: CodeLevel) -> BTreeMap<String, usize> {
        let mut f = BTreeMap::new();
        for l in self.labels(level) {
            *f.entry(l.to_string()).or_insert(0) += 1;
        }
        f
    }
}

/// Number of distinct labels in use.
pub fn flexibility(codes: &ThematicCodes, level: CodeLevel) -> usize {
    codes.frequencies(level).len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Originality {
    /// `1 - f_c / N_p` per label.
    pub per_label: BTreeMap<String, f64>,
    /// Mean of the per-label values over every code instance; 0 with no codes.
    pub mean: f64,
}

/// Originality of each label relative to `message_count` messages (the
/// number of coded messages when `None`).
pub fn originality(
    codes: &ThematicCodes,
    level: CodeLevel,
    message_count: Option<usize>,
) -> Result<Originality> {
    let np = message_count.unwrap_or(codes.len());
    if np < codes.len() {
        return Err(Error::BadParams(format!(
            "message count {np} is below the {} coded messages",
            codes.len()
        )));
    }
    let freq = codes.frequencies(level);
    if freq.is_empty() {
        return Ok(Originality {
            per_label: BTreeMap::new(),
            mean: 0.0,
        });
    }
    let per_label: BTreeMap<String, f64> = freq
        .iter()
        .map(|(l, &f)| (l.clone(), 1.0 - f as f64 / np as f64))
        .collect();
    let instances: usize = freq.values().sum();
    let weighted: f64 = freq.iter().map(|(l, &f)| per_label[l] * f as f64).sum();
    Ok(Originality {
        per_label,
        mean: weighted / instances as f64,
    })
}

/// `-ln(t)`; faster ideation scores higher.
pub fn fluency(elapsed_seconds: f64) -> Result<f64> {
    if !elapsed_seconds.is_finite() || elapsed_seconds <= 0.0 {
        return Err(Error::BadParams(format!(
            "elapsed time must be positive, got {elapsed_seconds}"
        )));
    }
    // + 0.0 turns -0 into 0 for t = 1
    Ok(-elapsed_seconds.ln() + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(id: &str, cats: &[&str]) -> MessageCodes {
        MessageCodes {
            id: id.into(),
            categories: cats.iter().map(|s| s.to_string()).collect(),
            themes: vec![],
        }
    }

    #[test]
    fn all_same_label() {
        let codes =
            ThematicCodes::new((0..5).map(|k| msg(&k.to_string(), &["Goals"])).collect()).unwrap();
        assert_eq!(flexibility(&codes, CodeLevel::Category), 1);
        let o = originality(&codes, CodeLevel::Category, None).unwrap();
        assert_eq!(o.per_label["Goals"], 0.0);
        assert_eq!(o.mean, 0.0);
    }

    #[test]
    fn single_use_label() {
        let mut ms: Vec<MessageCodes> = (0..4).map(|k| msg(&k.to_string(), &["Goals"])).collect();
        ms.push(msg("x", &["Rare"]));
        let codes = ThematicCodes::new(ms).unwrap();
        let o = originality(&codes, CodeLevel::Category, None).unwrap();
        assert_eq!(o.per_label["Rare"], 1.0 - 1.0 / 5.0);
        assert!((o.mean - (4.0 * 0.2 + 0.8) / 5.0).abs() < 1e-15);
        assert_eq!(flexibility(&codes, CodeLevel::Theme), 0);
    }

    #[test]
    fn empty_and_errors() {
        let empty = ThematicCodes::default();
        assert_eq!(flexibility(&empty, CodeLevel::Category), 0);
        assert_eq!(
            originality(&empty, CodeLevel::Theme, None).unwrap().mean,
            0.0
        );
        assert!(ThematicCodes::new(vec![msg("a", &[]), msg("a", &[])]).is_err());
        let one = ThematicCodes::new(vec![msg("a", &["x"])]).unwrap();
        assert!(originality(&one, CodeLevel::Category, Some(0)).is_err());
        assert!(one.check_ids(["b"]).is_err());
        one.check_ids(["a", "b"]).unwrap();
    }

    #[test]
    fn fluency_values() {
        assert!(fluency(1.0).unwrap().is_sign_positive());
        assert_eq!(fluency(1.0).unwrap(), 0.0);
        assert!((fluency(std::f64::consts::E).unwrap() + 1.0).abs() < 1e-15);
        assert!(fluency(0.0).is_err());
        assert!(fluency(-2.0).is_err());
    }
}
