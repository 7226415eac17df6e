//! Vertex-to-group assignments shared by the generators, detectors and metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of each vertex to a community, with indices dense in `0..count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    community: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Build from arbitrary labels, renumbering them to `0..k` in first-seen order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut community = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            community.push(*map.entry(l).or_insert(next));
        }
        Partition {
            count: map.len(),
            community,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            community: (0..n).collect(),
            count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            community: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.community.len()
    }

    pub fn is_empty(&self) -> bool {
        self.community.is_empty()
    }

    /// Number of communities.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn community(&self, v: usize) -> usize {
        self.community[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.community
    }

    /// Members of each community, in vertex order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (v, &c) in self.community.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &c in &self.community {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Planted category of each item, recorded by the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    category: Vec<usize>,
    categories: usize,
}

impl GroundTruth {
    /// `categories` blocks of `size` consecutive items each.
    pub fn blocks(categories: usize, size: usize) -> Self {
        GroundTruth {
            category: (0..categories * size).map(|i| i / size).collect(),
            categories,
        }
    }

    pub fn from_categories(category: Vec<usize>) -> Result<Self> {
        let categories = category.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; categories];
        for &c in &category {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::config(format!(
                "category labels must be dense; label {missing} is unused"
            )));
        }
        Ok(GroundTruth {
            category,
            categories,
        })
    }

    pub fn len(&self) -> usize {
        self.category.len()
    }

    pub fn is_empty(&self) -> bool {
        self.category.is_empty()
    }

    pub fn categories(&self) -> usize {
        self.categories
    }

    pub fn category(&self, item: usize) -> usize {
        self.category[item]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.category
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_labels(&self.category)
    }
}
