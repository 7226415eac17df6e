//! Synthetic ordinal rankings with planted categories.
//!
//! Each voter orders the categories at random, gives every category a
//! contiguous block of ranks, shuffles ranks inside each block, and then mixes
//! the categories: in a second random category order, every category swaps
//! `p` of its current members with every other category. Swapped-in items can
//! be swapped out again later in the same voter's mixing pass.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::GroundTruth;
use crate::seed::{derive_seed, rng_from_seed, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingConfig {
    pub categories: usize,
    pub category_size: usize,
    /// Items swapped per ordered category pair.
    pub mixing: usize,
    pub voters: usize,
    pub seed: u64,
}

impl RankingConfig {
    pub fn new(
        categories: usize,
        category_size: usize,
        mixing: usize,
        voters: usize,
        seed: u64,
    ) -> Result<Self> {
        let cfg = RankingConfig {
            categories,
            category_size,
            mixing,
            voters,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.categories == 0 || self.category_size == 0 || self.voters == 0 {
            return Err(Error::config(
                "categories, category size and voters must all be positive",
            ));
        }
        if self.mixing > self.category_size {
            return Err(Error::config(format!(
                "mixing p = {} exceeds category size S = {}",
                self.mixing, self.category_size
            )));
        }
        Ok(())
    }

    /// Total item count `N = S * C`.
    pub fn items(&self) -> usize {
        self.categories * self.category_size
    }
}

/// `voters x items` matrix of 0-based ranks; every row is a permutation of `0..items`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingMatrix {
    voters: usize,
    items: usize,
    ranks: Vec<u32>,
}

impl RankingMatrix {
    /// Validates that every row is a permutation of `0..items`.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let items = rows.first().map_or(0, Vec::len);
        let voters = rows.len();
        let mut ranks = Vec::with_capacity(voters * items);
        let mut seen = vec![false; items];
        for row in rows {
            if row.len() != items {
                return Err(Error::DimensionMismatch {
                    expected: items,
                    actual: row.len(),
                });
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &r in &row {
                let r = r as usize;
                if r >= items || seen[r] {
                    return Err(Error::config("ranking row is not a permutation of 0..N"));
                }
                seen[r] = true;
            }
            ranks.extend(row);
        }
        Ok(RankingMatrix {
            voters,
            items,
            ranks,
        })
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn row(&self, voter: usize) -> &[u32] {
        &self.ranks[voter * self.items..(voter + 1) * self.items]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact panics on a zero chunk size
        self.ranks.chunks_exact(self.items.max(1))
    }

    pub fn rank(&self, voter: usize, item: usize) -> u32 {
        self.ranks[voter * self.items + item]
    }
}

/// Generate rankings from a single RNG stream seeded with `config.seed`.
pub fn generate_rankings(config: &RankingConfig) -> Result<(RankingMatrix, GroundTruth)> {
    config.validate()?;
    let n = config.items();
    let mut rng = rng_from_seed(config.seed);
    let mut ranks = vec![0u32; config.voters * n];
    for row in ranks.chunks_exact_mut(n) {
        fill_voter(config, row, &mut rng);
    }
    Ok((
        RankingMatrix {
            voters: config.voters,
            items: n,
            ranks,
        },
        GroundTruth::blocks(config.categories, config.category_size),
    ))
}

/// Generate rankings with an independent stream per voter.
///
/// Voter `v` draws from `derive_seed(config.seed, stream::VOTER, v)`, so the
/// output does not depend on thread count. It differs from
/// [`generate_rankings`], which threads one stream through all voters.
pub fn generate_rankings_per_voter(config: &RankingConfig) -> Result<(RankingMatrix, GroundTruth)> {
    config.validate()?;
    let n = config.items();
    let mut ranks = vec![0u32; config.voters * n];
    let fill = |(v, row): (usize, &mut [u32])| {
        let mut rng = rng_from_seed(derive_seed(config.seed, stream::VOTER, v as u64));
        fill_voter(config, row, &mut rng);
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ranks.par_chunks_exact_mut(n).enumerate().for_each(fill);
    }
    #[cfg(not(feature = "parallel"))]
    ranks.chunks_exact_mut(n).enumerate().for_each(fill);
    Ok((
        RankingMatrix {
            voters: config.voters,
            items: n,
            ranks,
        },
        GroundTruth::blocks(config.categories, config.category_size),
    ))
}

fn fill_voter<R: Rng + ?Sized>(config: &RankingConfig, row: &mut [u32], rng: &mut R) {
    let c = config.categories;
    let s = config.category_size;

    // Category i takes the rank block at position order[i].
    let mut order: Vec<usize> = (0..c).collect();
    order.shuffle(rng);
    for (cat, &block) in order.iter().enumerate() {
        let mut block_ranks: Vec<u32> = ((block * s) as u32..((block + 1) * s) as u32).collect();
        block_ranks.shuffle(rng);
        row[cat * s..(cat + 1) * s].copy_from_slice(&block_ranks);
    }

    if config.mixing == 0 || c < 2 {
        return;
    }

    // members[k] holds the items currently resting in category k's block.
    let mut members: Vec<Vec<usize>> = (0..c).map(|k| (k * s..(k + 1) * s).collect()).collect();
    let mut mix_order: Vec<usize> = (0..c).collect();
    mix_order.shuffle(rng);
    for &c1 in &mix_order {
        for &c2 in &mix_order {
            if c1 == c2 {
                continue;
            }
            let from_first = index::sample(rng, s, config.mixing).into_vec();
            let mut from_second = index::sample(rng, s, config.mixing).into_vec();
            from_second.shuffle(rng);
            for (&i1, &i2) in from_first.iter().zip(&from_second) {
                let a = members[c1][i1];
                let b = members[c2][i2];
                row.swap(a, b);
                members[c1][i1] = b;
                members[c2][i2] = a;
            }
        }
    }
}
