//! Diverse prompt selection over embedded phrase corpora.
//!
//! The crate covers the whole pipeline: phrase filtering ([`corpus`]),
//! embedding acquisition ([`provider`]), unit-sphere geometry
//! ([`geometry`]), single-linkage based diverse selection with optional
//! repellers ([`selection`]), diversity and creativity metrics with
//! bootstrap resampling ([`metrics`]), and a seeded simulation harness
//! ([`simulation`]).

pub mod corpus;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod provider;
pub mod selection;
pub mod simulation;

pub use error::{Error, Result};
pub use geometry::{
    angular_distance, angular_mean, normalize, pairwise_matrix, DistanceMatrix, UnitVector,
};
