//! Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
//!
//! Starts from singletons and repeatedly merges the pair of adjacent
//! communities with the largest modularity gain `dQ`, keeping a sparse `dQ`
//! row per community and the degree fractions `a_i = d_i / 2m`. Stops when no
//! merge has a positive gain. Equal gains go to the lexicographically
//! smallest `(i, j)` pair, and the merged community keeps the smaller index.

use std::collections::BTreeMap;

use crate::graph::SimilarityGraph;
use crate::partition::Partition;

/// Gains at or below this are treated as zero.
const GAIN_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CnmOutcome {
    pub partition: Partition,
    /// Modularity of the final partition; `None` for an edgeless graph.
    pub modularity: Option<f64>,
    pub merges: usize,
}

pub fn cnm_greedy_modularity(graph: &SimilarityGraph) -> CnmOutcome {
    let n = graph.n();
    let m = graph.edge_count();
    if m == 0 {
        return CnmOutcome {
            partition: Partition::singletons(n),
            modularity: None,
            merges: 0,
        };
    }
    let two_m = 2.0 * m as f64;
    let mut a: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64 / two_m).collect();
    let mut dq: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for &(i, j) in graph.edges() {
        let gain = 2.0 * (1.0 / two_m - a[i] * a[j]);
        dq[i].insert(j, gain);
        dq[j].insert(i, gain);
    }
    let mut q: f64 = -a.iter().map(|x| x * x).sum::<f64>();
    let mut owner: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    let mut merges = 0;

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for (&j, &gain) in dq[i].range(i + 1..) {
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= GAIN_EPSILON {
            break;
        }

        // Merge j into i.
        let row_j = std::mem::take(&mut dq[j]);
        let row_i = std::mem::take(&mut dq[i]);
        let mut merged = BTreeMap::new();
        for (&k, &g) in &row_i {
            if k == j {
                continue;
            }
            let value = match row_j.get(&k) {
                Some(&gj) => g + gj,
                None => g - 2.0 * a[j] * a[k],
            };
            merged.insert(k, value);
        }
        for (&k, &gj) in &row_j {
            if k == i || row_i.contains_key(&k) {
                continue;
            }
            merged.insert(k, gj - 2.0 * a[i] * a[k]);
        }
        for (&k, &value) in &merged {
            dq[k].remove(&j);
            dq[k].insert(i, value);
        }
        for &k in row_j.keys() {
            if k != i && !merged.contains_key(&k) {
                dq[k].remove(&j);
            }
        }
        dq[i] = merged;
        a[i] += a[j];
        a[j] = 0.0;
        alive[j] = false;
        for o in owner.iter_mut().filter(|o| **o == j) {
            *o = i;
        }
        q += gain;
        merges += 1;
    }

    CnmOutcome {
        partition: Partition::from_labels(&owner),
        modularity: Some(q),
        merges,
    }
}
