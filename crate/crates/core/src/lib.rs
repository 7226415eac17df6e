//! Discover latent item categories from ordinal rankings.
//!
//! The pipeline: generate (or load) rankings, collapse the voter-item data
//! into an item-item similarity graph by thresholding mean pairwise
//! similarity, then recover communities with distance-weighted label
//! propagation. Plain label propagation and greedy modularity (CNM) serve as
//! baselines, NMI and modularity as scores, and [`expectation`] gives the
//! closed-form expected rank distances that motivate the threshold.

pub mod detect;
pub mod error;
pub mod eval;
pub mod expectation;
pub mod graph;
pub mod io;
pub mod movielens;
pub mod partition;
pub mod ranking;
pub mod sbm;
pub mod seed;
pub mod similarity;

pub use error::{Error, Result};
pub use graph::{GraphSource, SimilarityGraph};
pub use partition::{GroundTruth, Partition};
pub use ranking::{generate_rankings, RankingConfig, RankingMatrix};
pub use sbm::{generate_sbm, SbmConfig};
pub use similarity::{build_similarity_matrix, similarity, threshold_graph, SimilarityMatrix};
