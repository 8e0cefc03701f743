use serde::{Deserialize, Serialize};

use super::diverse::select_diverse;
use crate::error::{Error, Result};
use crate::geometry::{angular_mean, pairwise_matrix, DistanceMatrix, UnitVector};

/// Phrases grouped into one prompt, by index into the phrase list.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptGroup {
    pub members: Vec<usize>,
    pub embedding: UnitVector,
}

/// A prompt as shown to ideators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prompt {
    pub prompt_id: String,
    pub phrase_ids: Vec<String>,
    pub embedding: UnitVector,
}

impl Prompt {
    pub fn from_group(
        prompt_id: impl Into<String>,
        group: &PromptGroup,
        phrase_ids: &[String],
    ) -> Self {
        Self {
            prompt_id: prompt_id.into(),
            phrase_ids: group
                .members
                .iter()
                .map(|&m| phrase_ids[m].clone())
                .collect(),
            embedding: group.embedding.clone(),
        }
    }
}

/// Anything carrying a unit embedding.
pub trait Embedded {
    fn embedding(&self) -> &UnitVector;
}

impl Embedded for UnitVector {
    fn embedding(&self) -> &UnitVector {
        self
    }
}

impl Embedded for PromptGroup {
    fn embedding(&self) -> &UnitVector {
        &self.embedding
    }
}

impl Embedded for Prompt {
    fn embedding(&self) -> &UnitVector {
        &self.embedding
    }
}

/// Greedy disjoint grouping into prompts of `g` phrases.
pub fn group_phrases(points: &[UnitVector], g: usize) -> Result<Vec<PromptGroup>> {
    if g == 0 || points.len() < g {
        return Err(Error::BadG {
            g,
            available: points.len(),
        });
    }
    if g == 1 {
        return Ok(singletons(points));
    }
    group_phrases_in(points, &pairwise_matrix(points)?, g)
}

fn singletons(points: &[UnitVector]) -> Vec<PromptGroup> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| PromptGroup {
            members: vec![i],
            embedding: p.clone(),
        })
        .collect()
}

/// [`group_phrases`] with a precomputed matrix over `points`.
///
/// Seeds are visited from the most isolated phrase (largest nearest-neighbour
/// distance) down; each unused seed claims its `g - 1` nearest unused
/// neighbours. Grouping stops once fewer than `g` phrases remain unused.
/// With `g = 1` every phrase is its own prompt, in input order.
pub fn group_phrases_in(
    points: &[UnitVector],
    matrix: &DistanceMatrix,
    g: usize,
) -> Result<Vec<PromptGroup>> {
    let n = points.len();
    if g == 0 || n < g {
        return Err(Error::BadG { g, available: n });
    }
    if g == 1 {
        return Ok(singletons(points));
    }
    if matrix.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: matrix.len(),
        });
    }
    let isolation: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| matrix.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by(|&a, &b| isolation[b].total_cmp(&isolation[a]).then(a.cmp(&b)));

    let mut used = vec![false; n];
    let mut unused = n;
    let mut groups = Vec::with_capacity(n / g);
    for seed in seeds {
        if unused < g {
            break;
        }
        if used[seed] {
            continue;
        }
        let mut neighbours: Vec<usize> = (0..n).filter(|&j| j != seed && !used[j]).collect();
        neighbours.sort_by(|&a, &b| {
            matrix
                .get(seed, a)
                .total_cmp(&matrix.get(seed, b))
                .then(a.cmp(&b))
        });
        let mut members = Vec::with_capacity(g);
        members.push(seed);
        members.extend_from_slice(&neighbours[..g - 1]);
        for &m in &members {
            used[m] = true;
        }
        unused -= g;
        let vs: Vec<UnitVector> = members.iter().map(|&m| points[m].clone()).collect();
        groups.push(PromptGroup {
            members,
            embedding: angular_mean(&vs)?,
        });
    }
    Ok(groups)
}

/// Diverse selection applied to prompt embeddings; returns indices into `prompts`.
pub fn select_diverse_prompts<P: Embedded>(prompts: &[P], n: usize) -> Result<Vec<usize>> {
    let embeddings: Vec<UnitVector> = prompts.iter().map(|p| p.embedding().clone()).collect();
    select_diverse(&embeddings, n)
}
