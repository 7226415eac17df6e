use crate::error::{Error, Result};
use crate::graph::SimilarityGraph;
use crate::partition::Partition;

/// Newman-Girvan modularity `Q = sum_c [e_c / m - (d_c / 2m)^2]`.
pub fn modularity(graph: &SimilarityGraph, partition: &Partition) -> Result<f64> {
    if partition.len() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            actual: partition.len(),
        });
    }
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let k = partition.count();
    let mut internal = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for &(a, b) in graph.edges() {
        let (ca, cb) = (partition.community(a), partition.community(b));
        degree[ca] += 1;
        degree[cb] += 1;
        if ca == cb {
            internal[ca] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| {
            let frac = d as f64 / (2.0 * m);
            e as f64 / m - frac * frac
        })
        .sum())
}
