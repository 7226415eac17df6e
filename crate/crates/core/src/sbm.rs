//! Planted-partition (stochastic block model) graphs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphSource, SimilarityGraph};
use crate::partition::GroundTruth;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmConfig {
    pub communities: usize,
    pub size: usize,
    /// Intra-community edge probability.
    pub p_in: f64,
    /// Inter-community edge probability.
    pub p_out: f64,
    pub seed: u64,
}

impl SbmConfig {
    pub fn new(communities: usize, size: usize, p_in: f64, p_out: f64, seed: u64) -> Self {
        SbmConfig {
            communities,
            size,
            p_in,
            p_out,
            seed,
        }
    }

    /// `p_out > p_in` is allowed (disassortative graphs) and reported by this check.
    pub fn is_assortative(&self) -> bool {
        self.p_out <= self.p_in
    }

    fn validate(&self) -> Result<()> {
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Sample a planted-partition graph; pairs are visited in `(i, j)`, `i < j` order.
pub fn generate_sbm(config: &SbmConfig) -> Result<(SimilarityGraph, GroundTruth)> {
    config.validate()?;
    let n = config.communities * config.size;
    let truth = GroundTruth::blocks(config.communities, config.size);
    let mut rng = rng_from_seed(config.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if truth.category(i) == truth.category(j) {
                config.p_in
            } else {
                config.p_out
            };
            // random_bool(1.0) always succeeds and random_bool(0.0) never does
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok((
        SimilarityGraph::from_sorted_edges(n, edges, None, GraphSource::Sbm),
        truth,
    ))
}
