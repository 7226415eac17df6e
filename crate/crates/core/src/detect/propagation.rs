//! Label propagation, plain and distance-weighted.
//!
//! Every vertex starts with its own id as label, so a label's id is also the
//! vertex it originated from. In the weighted variant a neighbor `z` holding
//! label `L` votes with `W(dist(L, z))`, the hop distance from `L`'s origin to
//! `z`; labels that have travelled far from home lose influence.
//!
//! The vertex visiting order is drawn once per run. A pass in which no label
//! changes ends the run as converged; otherwise the run stops at `max_iters`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detect::distance::DistanceTable;
use crate::error::{Error, Result};
use crate::graph::SimilarityGraph;
use crate::partition::Partition;
use crate::seed::rng_from_seed;

/// Weighted counts within this relative margin of the maximum count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// Vote weight as a function of hop distance from a label's origin.
///
/// `W(0) = 1` for every kind; unreachable distances weigh 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightFunction {
    /// `1 / d`
    Linear,
    /// `1 / 2^d`
    Exponential,
    /// Constant 1, which reduces to plain label propagation.
    Unit,
}

impl WeightFunction {
    pub fn weight(self, distance: Option<u32>) -> f64 {
        match distance {
            None => 0.0,
            Some(0) => 1.0,
            Some(d) => match self {
                WeightFunction::Linear => 1.0 / f64::from(d),
                WeightFunction::Exponential => 0.5f64.powi(d.min(1100) as i32),
                WeightFunction::Unit => 1.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeightFunction::Linear => "linear",
            WeightFunction::Exponential => "exp",
            WeightFunction::Unit => "unit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagationMode {
    /// Every vertex reads the labels of the previous pass.
    Sync,
    /// Vertices read labels already updated earlier in the same pass.
    Async,
}

impl PropagationMode {
    pub fn name(self) -> &'static str {
        match self {
            PropagationMode::Sync => "sync",
            PropagationMode::Async => "async",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub mode: PropagationMode,
    pub max_iters: usize,
    pub seed: u64,
    /// Keep the current label whenever it is among the tied maxima.
    pub sticky_ties: bool,
    /// Keep a copy of the labels after every pass.
    pub record_trajectory: bool,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            mode: PropagationMode::Async,
            max_iters: 100,
            seed: 0,
            sticky_ties: true,
            record_trajectory: false,
        }
    }
}

/// Labels at some pass; a label's id is its origin vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelState {
    pub labels: Vec<usize>,
    pub iteration: usize,
}

impl LabelState {
    pub fn initial(n: usize) -> Self {
        LabelState {
            labels: (0..n).collect(),
            iteration: 0,
        }
    }

    /// The vertex where `label` originated.
    pub fn source(&self, label: usize) -> usize {
        label
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOutcome {
    pub partition: Partition,
    pub state: LabelState,
    /// Full passes performed.
    pub iterations: usize,
    pub converged: bool,
    /// Labels after each pass, when requested.
    pub trajectory: Vec<Vec<usize>>,
}

/// Label propagation where each vote counts 1.
pub fn standard_label_propagation(
    graph: &SimilarityGraph,
    config: &PropagationConfig,
) -> PropagationOutcome {
    propagate(graph, config, |_, _| 1.0)
}

/// Label propagation with votes weighted by distance from each label's origin.
pub fn weighted_label_propagation(
    graph: &SimilarityGraph,
    weights: WeightFunction,
    distances: &DistanceTable,
    config: &PropagationConfig,
) -> Result<PropagationOutcome> {
    if distances.n() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            actual: distances.n(),
        });
    }
    Ok(propagate(graph, config, |label, holder| {
        weights.weight(distances.get(label, holder))
    }))
}

fn propagate<F>(graph: &SimilarityGraph, config: &PropagationConfig, vote: F) -> PropagationOutcome
where
    F: Fn(usize, usize) -> f64,
{
    let n = graph.n();
    let mut rng = rng_from_seed(config.seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut state = LabelState::initial(n);
    let mut snapshot = state.labels.clone();
    let mut counts: Vec<(usize, f64)> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();
    let mut trajectory = Vec::new();
    let mut converged = false;

    while state.iteration < config.max_iters {
        if config.mode == PropagationMode::Sync {
            snapshot.copy_from_slice(&state.labels);
        }
        let mut changed = false;
        for &v in &order {
            let neighbors = graph.neighbors(v);
            if neighbors.is_empty() {
                continue;
            }
            let read = match config.mode {
                PropagationMode::Sync => &snapshot,
                PropagationMode::Async => &state.labels,
            };
            // Candidates in first-seen neighbor order, so tie draws are reproducible.
            counts.clear();
            for &z in neighbors {
                let label = read[z];
                let w = vote(label, z);
                match counts.iter_mut().find(|(l, _)| *l == label) {
                    Some(entry) => entry.1 += w,
                    None => counts.push((label, w)),
                }
            }
            let best = counts.iter().map(|&(_, c)| c).fold(0.0, f64::max);
            if best <= 0.0 {
                continue;
            }
            tied.clear();
            tied.extend(
                counts
                    .iter()
                    .filter(|&&(_, c)| c >= best * (1.0 - TIE_TOLERANCE))
                    .map(|&(l, _)| l),
            );
            let current = state.labels[v];
            let next = if config.sticky_ties && tied.contains(&current) {
                current
            } else if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.random_range(0..tied.len())]
            };
            if next != current {
                state.labels[v] = next;
                changed = true;
            }
        }
        state.iteration += 1;
        if config.record_trajectory {
            trajectory.push(state.labels.clone());
        }
        if !changed {
            converged = true;
            break;
        }
    }

    PropagationOutcome {
        partition: Partition::from_labels(&state.labels),
        iterations: state.iteration,
        converged,
        trajectory,
        state,
    }
}
