//! All-pairs hop distances by one breadth-first search per source.

use std::collections::VecDeque;

use crate::graph::SimilarityGraph;

const UNREACHABLE: u32 = u32::MAX;

/// Hop distance between every pair of vertices; `None` when disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> Option<u32> {
        match self.dist[from * self.n + to] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }
}

fn bfs_row(graph: &SimilarityGraph, source: usize, row: &mut [u32]) {
    row.fill(UNREACHABLE);
    row[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = row[u] + 1;
        for &w in graph.neighbors(u) {
            if row[w] == UNREACHABLE {
                row[w] = next;
                queue.push_back(w);
            }
        }
    }
}

/// Edges are unweighted, so BFS gives the same table as unit-weight Dijkstra.
pub fn all_pairs_distances(graph: &SimilarityGraph) -> DistanceTable {
    let n = graph.n();
    let mut dist = vec![UNREACHABLE; n * n];
    if n > 0 {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            dist.par_chunks_exact_mut(n)
                .enumerate()
                .for_each(|(s, row)| bfs_row(graph, s, row));
        }
        #[cfg(not(feature = "parallel"))]
        dist.chunks_exact_mut(n)
            .enumerate()
            .for_each(|(s, row)| bfs_row(graph, s, row));
    }
    DistanceTable { n, dist }
}
