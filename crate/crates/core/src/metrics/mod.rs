//! Diversity and creativity metrics.
//!
//! Individual metrics score each point against the rest of its set;
//! collective metrics score a whole set and live in a [`MetricRegistry`].
//! Intra-prompt, adoption and thematic metrics work on prompts, ideation
//! texts and supplied codes respectively.

mod bootstrap;
mod collective;
mod distance;
mod entropy;
mod prompt;
mod report;
mod thematic;

pub use bootstrap::{bootstrap, DEFAULT_SAMPLES};
pub use collective::{
    entropy, span, span_from_distances, CollectiveMetric, EntropyMetric, MetricRegistry, PointSet,
    SpanConfig, SpanMetric,
};
pub use distance::{
    chamfer, mean_pairwise, medoid, min_pairwise, mst_dispersion, percentile, remote_clique,
    sparseness,
};
pub use entropy::{grid_entropy, pca_projection, EntropyConfig, GridBounds};
pub use prompt::{
    intra_prompt_mean, prompt_ideation_distance, prompt_phrase_chamfer, prompt_precision,
    prompt_recall,
};
pub use report::{
    bootstrap_csv, collective_reports, individual_reports, metrics_csv, MetricReport, MetricValue,
    Scope, BOOTSTRAP_HEADER, METRICS_HEADER, SCHEMA_LINE,
};
pub use thematic::{
    flexibility, fluency, originality, CodeLevel, MessageCodes, Originality, ThematicCodes,
};
