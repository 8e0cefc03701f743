//! Diverse prompt selection.
//!
//! The corpus is clustered by single linkage (equivalently, its minimum
//! spanning tree), the dendrogram is cut into as many clusters as prompts are
//! wanted, and each cluster contributes its most outward-facing member.
//! Prior ideations act as repellers that remove nearby candidates before the
//! tree is built.

mod diverse;
mod grouping;
mod linkage;
mod strategy;

pub use diverse::{
    exclude_near, select_directed_away, select_directed_away_in, select_diverse, select_diverse_in,
    RepellerConfig,
};
pub use grouping::{
    group_phrases, group_phrases_in, select_diverse_prompts, Embedded, Prompt, PromptGroup,
};
pub use linkage::{
    cut_clusters, minimum_spanning_tree, single_linkage, ClusterAssignment, Merge, MergeTree,
    MstEdge,
};
pub use strategy::{
    CandidatePool, DirectedSelector, PromptCandidates, PromptSelector, RandomSelector,
    SelectionRequest, SelectorRegistry,
};
