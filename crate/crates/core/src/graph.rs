//! Simple undirected item graphs and their edge-list file format.
//!
//! On disk a graph is a text file with one `i j` pair per line (0-based,
//! `#` starts a comment) plus a JSON sidecar carrying `n`, the threshold,
//! the edge ratio and where the graph came from.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphSource {
    Thresholded,
    Sbm,
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    threshold: Option<f64>,
    source: GraphSource,
}

/// Contents of the JSON sidecar written next to an edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub n: usize,
    pub epsilon: Option<f64>,
    pub edge_ratio: f64,
    pub edges: usize,
    pub source: GraphSource,
}

impl SimilarityGraph {
    /// Build from arbitrary pairs. Self-loops are dropped, duplicates merged.
    pub fn from_edges(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        source: GraphSource,
    ) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::config(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(n, edges, None, source))
    }

    pub(crate) fn from_sorted_edges(
        n: usize,
        edges: Vec<(usize, usize)>,
        threshold: Option<f64>,
        source: GraphSource,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        SimilarityGraph {
            n,
            edges,
            adjacency,
            threshold,
            source,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn source(&self) -> GraphSource {
        self.source
    }

    /// `|E| / C(n, 2)`; zero when fewer than two vertices.
    pub fn edge_ratio(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let possible = self.n as f64 * (self.n as f64 - 1.0) / 2.0;
        self.edges.len() as f64 / possible
    }

    /// Connected component index of each vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn meta(&self) -> GraphMeta {
        GraphMeta {
            n: self.n,
            epsilon: self.threshold,
            edge_ratio: self.edge_ratio(),
            edges: self.edges.len(),
            source: self.source,
        }
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(a, b) in &self.edges {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }

    /// Parse an edge list. `n` defaults to one past the largest id seen.
    pub fn read_edge_list<R: BufRead>(input: R, n: Option<usize>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<edge list>", e))?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut fields = body.split_whitespace();
            let mut next = |name: &str| -> Result<usize> {
                let tok = fields.next().ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    field: name.into(),
                    message: "missing".into(),
                })?;
                tok.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    field: name.into(),
                    message: format!("`{tok}` is not a vertex id"),
                })
            };
            let a = next("source")?;
            let b = next("target")?;
            pairs.push((a, b));
        }
        let seen = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let n = match n {
            Some(n) if n < seen => {
                return Err(Error::config(format!(
                    "edge list references vertex {} but n = {n}",
                    seen - 1
                )))
            }
            Some(n) => n,
            None => seen,
        };
        Self::from_edges(n, pairs, GraphSource::File)
    }

    /// Write `<path>` (edge list) and `<path>.json` (sidecar).
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_edge_list(&mut w)
            .map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
        let sidecar = sidecar_path(path);
        let json = serde_json::to_string_pretty(&self.meta())?;
        std::fs::write(&sidecar, json + "\n").map_err(|e| Error::io(&sidecar, e))?;
        Ok(())
    }

    /// Load an edge list, taking `n`, threshold and source from the sidecar if present.
    pub fn load(path: &Path) -> Result<Self> {
        let sidecar = sidecar_path(path);
        let meta: Option<GraphMeta> = match std::fs::read_to_string(&sidecar) {
            Ok(text) => Some(serde_json::from_str(&text)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(Error::io(&sidecar, e)),
        };
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut g =
            Self::read_edge_list(std::io::BufReader::new(file), meta.as_ref().map(|m| m.n))?;
        if let Some(meta) = meta {
            g.threshold = meta.epsilon;
            g.source = meta.source;
        }
        Ok(g)
    }
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    name.into()
}
