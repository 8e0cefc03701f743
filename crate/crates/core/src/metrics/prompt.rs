//! Per-prompt metrics: spread of the phrases inside a prompt, and how much
//! of a prompt an ideation took up.

use std::collections::HashSet;

use crate::corpus::tokens;
use crate::error::{Error, Result};
use crate::geometry::{angular_distance, DistanceMatrix, UnitVector};

fn check_members(members: &[usize], matrix: &DistanceMatrix) -> Result<()> {
    if members.is_empty() {
        return Err(Error::EmptyInput("prompt has no phrases".into()));
    }
    if let Some(&bad) = members.iter().find(|&&m| m >= matrix.len()) {
        return Err(Error::BadParams(format!(
            "phrase index {bad} out of range for {} phrases",
            matrix.len()
        )));
    }
    Ok(())
}

/// Mean distance over the unordered phrase pairs of one prompt; 0 for a
/// single-phrase prompt.
pub fn intra_prompt_mean(members: &[usize], matrix: &DistanceMatrix) -> Result<f64> {
    check_members(members, matrix)?;
    let g = members.len();
    if g == 1 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for a in 0..g {
        for b in (a + 1)..g {
            sum += matrix.get(members[a], members[b]);
        }
    }
    Ok(sum / (g * (g - 1) / 2) as f64)
}

/// Mean over the prompt's phrases of the distance to the nearest other
/// phrase in the same prompt; 0 for a single-phrase prompt.
pub fn prompt_phrase_chamfer(members: &[usize], matrix: &DistanceMatrix) -> Result<f64> {
    check_members(members, matrix)?;
    let g = members.len();
    if g == 1 {
        return Ok(0.0);
    }
    let total: f64 = members
        .iter()
        .enumerate()
        .map(|(a, &i)| {
            members
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &j)| matrix.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / g as f64)
}

/// Average over phrases of the share of each phrase's tokens that occur in
/// the ideation.
pub fn prompt_recall<S: AsRef<str>>(phrases: &[S], ideation: &str) -> Result<f64> {
    if phrases.is_empty() {
        return Err(Error::EmptyInput("prompt has no phrases".into()));
    }
    let used: HashSet<String> = tokens(ideation).into_iter().collect();
    let mut total = 0.0;
    for phrase in phrases {
        let toks = tokens(phrase.as_ref());
        if toks.is_empty() {
            return Err(Error::EmptyInput(format!(
                "phrase {:?} has no words",
                phrase.as_ref()
            )));
        }
        let hit = toks.iter().filter(|t| used.contains(*t)).count();
        total += hit as f64 / toks.len() as f64;
    }
    Ok(total / phrases.len() as f64)
}

/// Share of the ideation's distinct tokens that come from any prompt phrase.
/// An ideation with no words scores 0.
pub fn prompt_precision<S: AsRef<str>>(phrases: &[S], ideation: &str) -> Result<f64> {
    if phrases.is_empty() {
        return Err(Error::EmptyInput("prompt has no phrases".into()));
    }
    let vocab: HashSet<String> = phrases.iter().flat_map(|p| tokens(p.as_ref())).collect();
    let used: HashSet<String> = tokens(ideation).into_iter().collect();
    if used.is_empty() {
        return Ok(0.0);
    }
    Ok(used.intersection(&vocab).count() as f64 / used.len() as f64)
}

pub fn prompt_ideation_distance(prompt: &UnitVector, ideation: &UnitVector) -> Result<f64> {
    angular_distance(prompt, ideation)
}
