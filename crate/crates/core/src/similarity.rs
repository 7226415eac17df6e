//! Voter-item rankings collapsed into item-item mean similarity.

use crate::error::{Error, Result};
use crate::graph::{GraphSource, SimilarityGraph};
use crate::ranking::RankingMatrix;

/// Closeness of two ranks among `n` items: `1 - |a - b| / n`, in `(0, 1]`.
pub fn similarity(a: u32, b: u32, n: usize) -> f64 {
    debug_assert!(n >= 1 && (a as usize) < n && (b as usize) < n);
    1.0 - f64::from(a.abs_diff(b)) / n as f64
}

/// Symmetric item-item mean similarity plus co-observation counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    mean_sim: Vec<f64>,
    voters_counted: Vec<u32>,
}

impl SimilarityMatrix {
    /// Assemble from raw parts. The diagonal is forced to 1.
    pub fn from_parts(n: usize, mut mean_sim: Vec<f64>, voters_counted: Vec<u32>) -> Result<Self> {
        if mean_sim.len() != n * n || voters_counted.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: mean_sim.len().min(voters_counted.len()),
            });
        }
        for i in 0..n {
            mean_sim[i * n + i] = 1.0;
            for j in 0..i {
                let (a, b) = (mean_sim[i * n + j], mean_sim[j * n + i]);
                if a != b || voters_counted[i * n + j] != voters_counted[j * n + i] {
                    return Err(Error::config(format!("matrix not symmetric at ({i}, {j})")));
                }
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::config(format!(
                        "similarity {a} at ({i}, {j}) outside [0, 1]"
                    )));
                }
            }
        }
        Ok(SimilarityMatrix {
            n,
            mean_sim,
            voters_counted,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mean_sim[i * self.n + j]
    }

    pub fn voters_counted(&self, i: usize, j: usize) -> u32 {
        self.voters_counted[i * self.n + j]
    }

    /// Off-diagonal pairs `(i, j, similarity)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Write as CSV, one row per item.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record((0..self.n).map(|i| format!("item_{i}")))?;
        for i in 0..self.n {
            w.write_record(
                self.mean_sim[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|v| v.to_string()),
            )?;
        }
        w.flush().map_err(|e| Error::io("<similarity csv>", e))?;
        Ok(())
    }
}

/// Mean similarity over all voters for every item pair.
///
/// Per-voter rank distances are accumulated as integers, so the result does
/// not depend on voter order or on how the voters are split across threads.
pub fn build_similarity_matrix(rankings: &RankingMatrix) -> SimilarityMatrix {
    let n = rankings.items();
    let v = rankings.voters();

    let accumulate = |mut acc: Vec<u64>, row: &[u32]| {
        for i in 0..n {
            let ri = row[i];
            for j in i + 1..n {
                acc[i * n + j] += u64::from(ri.abs_diff(row[j]));
            }
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let dist_sum = {
        use rayon::prelude::*;
        (0..v)
            .into_par_iter()
            .fold(
                || vec![0u64; n * n],
                |acc, k| accumulate(acc, rankings.row(k)),
            )
            .reduce(
                || vec![0u64; n * n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    #[cfg(not(feature = "parallel"))]
    let dist_sum = rankings.rows().fold(vec![0u64; n * n], accumulate);

    let mut mean_sim = vec![1.0; n * n];
    let denom = v as f64 * n as f64;
    for i in 0..n {
        for j in i + 1..n {
            let s = 1.0 - dist_sum[i * n + j] as f64 / denom;
            mean_sim[i * n + j] = s;
            mean_sim[j * n + i] = s;
        }
    }
    SimilarityMatrix {
        n,
        mean_sim,
        voters_counted: vec![v as u32; n * n],
    }
}

/// Keep pairs whose mean similarity is strictly above `epsilon`.
///
/// Pairs never observed together (zero co-count) are never connected.
pub fn threshold_graph(sim: &SimilarityMatrix, epsilon: f64) -> SimilarityGraph {
    let edges = sim
        .pairs()
        .filter(|&(i, j, s)| s > epsilon && sim.voters_counted(i, j) > 0)
        .map(|(i, j, _)| (i, j))
        .collect();
    SimilarityGraph::from_sorted_edges(sim.n(), edges, Some(epsilon), GraphSource::Thresholded)
}
