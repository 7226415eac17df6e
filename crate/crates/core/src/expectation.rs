//! Closed-form expected rank distances under the synthetic ranking model.
//!
//! Distances are the proxy for edge probabilities: a small expected distance
//! between two items means a high expected similarity, hence a likely edge
//! once the mean similarity is thresholded. Three quantities are provided:
//!
//! * overall: two items drawn uniformly from `N` ranks, `(N + 1) / 3`;
//! * intra: two items of one category of size `S` after `p` residents left
//!   and `p` outsiders arrived at positions `X_1..X_p`;
//! * inter: one item from each of two categories after a `p`-for-`p`
//!   exchange, categories separated by a gap of `D` blocks.
//!
//! Binomials follow the convention `C(n, k) = 0` whenever `k < 0` or `k > n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::GroundTruth;
use crate::similarity::SimilarityMatrix;

/// `C(n, k)` as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sum_{i=1}^{S-1} i (S - i)`: total distance over all pairs of `S` consecutive ranks.
pub fn block_pair_distance_sum(size: usize) -> f64 {
    (1..size).map(|i| (i * (size - i)) as f64).sum()
}

pub fn expected_overall_distance(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::config("need at least two items to form a pair"));
    }
    Ok((n as f64 + 1.0) / 3.0)
}

/// `1 - (N + 1) / (3N)`, the expected similarity of a uniform random pair.
pub fn expected_overall_similarity(n: usize) -> Result<f64> {
    Ok(1.0 - expected_overall_distance(n)? / n as f64)
}

/// Where the `p` incoming items sit inside the category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwapPositions {
    /// Explicit 1-based positions, distinct, each in `1..=S`.
    Exact(Vec<usize>),
    /// Uniform average over all `C(S, p)` distinct position sets.
    Averaged,
}

/// Expected intra-category distance with a single incoming item at position `x`.
pub fn expected_intra_distance_single(size: usize, x: usize) -> Result<f64> {
    check_positions(size, &[x])?;
    if size < 2 {
        return Err(Error::config("category needs at least two items"));
    }
    let s = size as f64;
    let incoming: f64 = (1..=size).map(|i| x.abs_diff(i) as f64).sum();
    let numer = (s - 1.0) * incoming + (s - 2.0) * block_pair_distance_sum(size);
    Ok(numer / (s * binomial(size as i64, 2)))
}

/// Expected intra-category distance with `p` swaps.
///
/// The ratio is linear in the two position sums, so the averaged mode plugs
/// in their means over all distinct position sets:
/// `E[sum_{i<j} |X_i - X_j|] = C(p, 2) (S + 1) / 3` and
/// `E[sum_j sum_i |X_j - i|] = p (S^2 - 1) / 3`.
pub fn expected_intra_distance(
    size: usize,
    swaps: usize,
    positions: &SwapPositions,
) -> Result<f64> {
    if size < 2 {
        return Err(Error::config("category needs at least two items"));
    }
    if swaps > size {
        return Err(Error::config(format!("p = {swaps} exceeds S = {size}")));
    }
    let s = size as f64;
    let (among_incoming, incoming_to_resident) = match positions {
        SwapPositions::Exact(xs) => {
            if xs.len() != swaps {
                return Err(Error::InvalidPositions(format!(
                    "expected {swaps} positions, got {}",
                    xs.len()
                )));
            }
            check_positions(size, xs)?;
            let mut among = 0.0;
            for (a, &xa) in xs.iter().enumerate() {
                for &xb in &xs[a + 1..] {
                    among += xa.abs_diff(xb) as f64;
                }
            }
            let cross: f64 = xs
                .iter()
                .flat_map(|&x| (1..=size).map(move |i| x.abs_diff(i) as f64))
                .sum();
            (among, cross)
        }
        SwapPositions::Averaged => {
            let p = swaps as f64;
            (
                binomial(swaps as i64, 2) * (s + 1.0) / 3.0,
                p * (s * s - 1.0) / 3.0,
            )
        }
    };
    let (si, pi) = (size as i64, swaps as i64);
    let numer = binomial(si, pi) * among_incoming
        + binomial(si - 1, pi) * incoming_to_resident
        + binomial(si - 2, pi) * block_pair_distance_sum(size);
    Ok(numer / (binomial(si, 2) * binomial(si, pi)))
}

fn check_positions(size: usize, xs: &[usize]) -> Result<()> {
    let mut seen = vec![false; size + 1];
    for &x in xs {
        if x == 0 || x > size {
            return Err(Error::InvalidPositions(format!(
                "position {x} outside 1..={size}"
            )));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidPositions(format!("position {x} repeated")));
        }
    }
    Ok(())
}

/// Expected distance between items of two categories `gap` blocks apart after `p` swaps.
pub fn expected_inter_distance(size: usize, swaps: usize, gap: usize) -> Result<f64> {
    if size == 0 {
        return Err(Error::config("category size must be positive"));
    }
    if swaps > size {
        return Err(Error::config(format!("p = {swaps} exceeds S = {size}")));
    }
    let s = size as f64;
    let (si, pi) = (size as i64, swaps as i64);
    let stay = binomial(si - 1, pi);
    let both_move = binomial(si - 1, pi - 1);
    let apart = (stay * stay + both_move * both_move) * s.powi(3) * (gap as f64 + 1.0);
    let together =
        4.0 * binomial(si - 2, pi - 1) * binomial(si, pi) * block_pair_distance_sum(size);
    Ok((apart + together) / (s * s * binomial(si, pi).powi(2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: usize,
    pub intra: f64,
    pub overall: f64,
    pub inter: f64,
}

/// Expected distances as a function of the mixing parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationCurve {
    pub category_size: usize,
    pub categories: usize,
    pub rows: Vec<CurveRow>,
}

impl ExpectationCurve {
    /// Smallest `p` whose inter-category distance is below the overall distance.
    pub fn crossing(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.inter < r.overall).map(|r| r.p)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["p", "intra", "overall", "inter"])?;
        for r in &self.rows {
            w.write_record([
                r.p.to_string(),
                r.intra.to_string(),
                r.overall.to_string(),
                r.inter.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<curve csv>", e))?;
        Ok(())
    }
}

/// Rows for `p = 0..=p_max` with averaged intra positions and `D = 0`.
///
/// Only two categories are supported: with more, pairs of categories sit at
/// varying gaps and there is no single inter-category curve.
pub fn emit_expectation_curve(
    size: usize,
    categories: usize,
    p_max: usize,
) -> Result<ExpectationCurve> {
    if categories != 2 {
        return Err(Error::Unsupported(format!(
            "expectation curve is defined for 2 categories, got {categories}"
        )));
    }
    if p_max > size {
        return Err(Error::config(format!("p_max = {p_max} exceeds S = {size}")));
    }
    let overall = expected_overall_distance(size * categories)?;
    let rows = (0..=p_max)
        .map(|p| {
            Ok(CurveRow {
                p,
                intra: expected_intra_distance(size, p, &SwapPositions::Averaged)?,
                overall,
                inter: expected_inter_distance(size, p, 0)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExpectationCurve {
        category_size: size,
        categories,
        rows,
    })
}

/// Empirical edge probabilities of a thresholded similarity matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBeta {
    /// Fraction of same-category pairs above the threshold.
    pub alpha: f64,
    /// Fraction of cross-category pairs above the threshold.
    pub beta: f64,
}

pub fn estimate_alpha_beta(
    sim: &SimilarityMatrix,
    truth: &GroundTruth,
    epsilon: f64,
) -> Result<AlphaBeta> {
    if sim.n() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: sim.n(),
            actual: truth.len(),
        });
    }
    let (mut same, mut same_hit, mut diff, mut diff_hit) = (0u64, 0u64, 0u64, 0u64);
    for (i, j, s) in sim.pairs() {
        let hit = u64::from(s > epsilon);
        if truth.category(i) == truth.category(j) {
            same += 1;
            same_hit += hit;
        } else {
            diff += 1;
            diff_hit += hit;
        }
    }
    let frac = |h: u64, t: u64| if t == 0 { 0.0 } else { h as f64 / t as f64 };
    Ok(AlphaBeta {
        alpha: frac(same_hit, same),
        beta: frac(diff_hit, diff),
    })
}
