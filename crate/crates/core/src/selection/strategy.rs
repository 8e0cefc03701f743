//! Prompt selection techniques behind a common trait, looked up by name.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::RngCore;

use super::diverse::{select_directed_away_in, select_diverse_in, RepellerConfig};
use super::grouping::{group_phrases_in, PromptGroup};
use crate::error::{Error, Result};
use crate::geometry::{
    angular_mean, check_dimensions, pairwise_matrix, DistanceMatrix, UnitVector,
};

/// Grouped candidate prompts and their pairwise distances.
#[derive(Debug)]
pub struct PromptCandidates {
    pub groups: Vec<PromptGroup>,
    pub embeddings: Vec<UnitVector>,
    pub matrix: DistanceMatrix,
}

/// A phrase corpus with lazily computed, memoized derived structures, shared
/// across repeated selections.
#[derive(Debug)]
pub struct CandidatePool {
    phrases: Vec<UnitVector>,
    phrase_matrix: OnceLock<DistanceMatrix>,
    grouped: Mutex<HashMap<usize, Arc<PromptCandidates>>>,
}

impl CandidatePool {
    pub fn new(phrases: Vec<UnitVector>) -> Result<Self> {
        check_dimensions(&phrases)?;
        Ok(Self {
            phrases,
            phrase_matrix: OnceLock::new(),
            grouped: Mutex::new(HashMap::new()),
        })
    }

    pub fn phrases(&self) -> &[UnitVector] {
        &self.phrases
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn phrase_matrix(&self) -> &DistanceMatrix {
        self.phrase_matrix.get_or_init(|| {
            pairwise_matrix(&self.phrases).expect("pool dimensions checked on construction")
        })
    }

    /// The greedy disjoint grouping of the whole corpus into prompts of `g`.
    pub fn grouped(&self, g: usize) -> Result<Arc<PromptCandidates>> {
        if let Some(c) = self.grouped.lock().expect("pool lock").get(&g) {
            return Ok(Arc::clone(c));
        }
        let groups = group_phrases_in(&self.phrases, self.phrase_matrix(), g)?;
        let embeddings: Vec<UnitVector> = groups.iter().map(|p| p.embedding.clone()).collect();
        let matrix = if g == 1 {
            self.phrase_matrix().clone()
        } else {
            pairwise_matrix(&embeddings)?
        };
        let built = Arc::new(PromptCandidates {
            groups,
            embeddings,
            matrix,
        });
        self.grouped
            .lock()
            .expect("pool lock")
            .insert(g, Arc::clone(&built));
        Ok(built)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelectionRequest<'a> {
    /// Number of prompts to select.
    pub n: usize,
    /// Phrases per prompt.
    pub g: usize,
    /// Prior ideations to steer away from.
    pub repellers: &'a [UnitVector],
    pub repeller: RepellerConfig,
}

impl<'a> SelectionRequest<'a> {
    pub fn new(n: usize, g: usize) -> Self {
        Self {
            n,
            g,
            repellers: &[],
            repeller: RepellerConfig::default(),
        }
    }

    pub fn with_repellers(mut self, repellers: &'a [UnitVector], config: RepellerConfig) -> Self {
        self.repellers = repellers;
        self.repeller = config;
        self
    }
}

pub trait PromptSelector: Send + Sync {
    fn name(&self) -> &str;

    /// Whether the output depends on the random generator.
    fn is_stochastic(&self, request: &SelectionRequest<'_>) -> bool;

    fn select(
        &self,
        pool: &CandidatePool,
        request: &SelectionRequest<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<PromptGroup>>;
}

/// Uniform sample of `n` prompts; for `g > 1` phrases are first shuffled and
/// cut into consecutive blocks of `g`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomSelector;

impl PromptSelector for RandomSelector {
    fn name(&self) -> &str {
        "random"
    }

    fn is_stochastic(&self, _: &SelectionRequest<'_>) -> bool {
        true
    }

    fn select(
        &self,
        pool: &CandidatePool,
        request: &SelectionRequest<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<PromptGroup>> {
        let (n, g) = (request.n, request.g);
        if g == 0 {
            return Err(Error::BadG {
                g,
                available: pool.len(),
            });
        }
        if n == 0 {
            return Err(Error::BadN {
                n,
                available: pool.len() / g,
            });
        }
        let needed = n * g;
        if needed > pool.len() {
            return Err(Error::CorpusTooSmall {
                available: pool.len(),
                needed,
            });
        }
        // The first n·g entries of a uniform shuffle, already in shuffled order.
        let order = rand::seq::index::sample(rng, pool.len(), needed).into_vec();
        order
            .chunks_exact(g)
            .map(|block| {
                let vs: Vec<UnitVector> =
                    block.iter().map(|&i| pool.phrases()[i].clone()).collect();
                Ok(PromptGroup {
                    members: block.to_vec(),
                    embedding: angular_mean(&vs)?,
                })
            })
            .collect()
    }
}

/// Greedy grouping, optional repeller exclusion, then dendrogram-based
/// diverse selection.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectedSelector;

impl PromptSelector for DirectedSelector {
    fn name(&self) -> &str {
        "directed"
    }

    fn is_stochastic(&self, _: &SelectionRequest<'_>) -> bool {
        false
    }

    fn select(
        &self,
        pool: &CandidatePool,
        request: &SelectionRequest<'_>,
        _rng: &mut dyn RngCore,
    ) -> Result<Vec<PromptGroup>> {
        let candidates = pool.grouped(request.g)?;
        let picked = if request.repellers.is_empty() {
            select_diverse_in(&candidates.matrix, request.n)?
        } else {
            select_directed_away_in(
                &candidates.embeddings,
                &candidates.matrix,
                request.repellers,
                request.n,
                &request.repeller,
            )?
        };
        Ok(picked
            .into_iter()
            .map(|i| candidates.groups[i].clone())
            .collect())
    }
}

/// Named prompt selectors.
#[derive(Clone)]
pub struct SelectorRegistry {
    selectors: BTreeMap<String, Arc<dyn PromptSelector>>,
}

impl SelectorRegistry {
    pub fn empty() -> Self {
        Self {
            selectors: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, selector: Arc<dyn PromptSelector>) {
        self.selectors.insert(selector.name().to_string(), selector);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn PromptSelector>> {
        self.selectors
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownName {
                kind: "selection technique",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.selectors.keys().map(String::as_str).collect()
    }
}

impl Default for SelectorRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(RandomSelector));
        r.register(Arc::new(DirectedSelector));
        r
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::geometry::normalize;
    use crate::selection::select_diverse;

    fn pool(n: usize) -> CandidatePool {
        let pts = (0..n)
            .map(|k| {
                let t = k as f64 * 0.61;
                normalize(&[t.cos(), t.sin(), (k % 5) as f64 * 0.3]).unwrap()
            })
            .collect();
        CandidatePool::new(pts).unwrap()
    }

    #[test]
    fn registry_lookup() {
        let r = SelectorRegistry::default();
        assert_eq!(r.names(), ["directed", "random"]);
        assert!(r.get("directed").is_ok());
        assert!(matches!(
            r.get("none").err(),
            Some(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn random_blocks_are_disjoint() {
        let p = pool(30);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let picked = RandomSelector
            .select(&p, &SelectionRequest::new(5, 3), &mut rng)
            .unwrap();
        assert_eq!(picked.len(), 5);
        let mut all: Vec<usize> = picked.iter().flat_map(|g| g.members.clone()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 15);
        assert!(matches!(
            RandomSelector.select(&p, &SelectionRequest::new(11, 3), &mut rng),
            Err(Error::CorpusTooSmall { .. })
        ));
    }

    #[test]
    fn directed_singletons_match_select_diverse() {
        let p = pool(40);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let picked = DirectedSelector
            .select(&p, &SelectionRequest::new(6, 1), &mut rng)
            .unwrap();
        let direct = select_diverse(p.phrases(), 6).unwrap();
        let got: Vec<usize> = picked.iter().map(|g| g.members[0]).collect();
        assert_eq!(got, direct);
    }
}
