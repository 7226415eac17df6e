//! Community detection on item graphs.

pub mod cnm;
pub mod distance;
pub mod modularity;
pub mod propagation;

use serde::{Deserialize, Serialize};

pub use cnm::{cnm_greedy_modularity, CnmOutcome};
pub use distance::{all_pairs_distances, DistanceTable};
pub use modularity::modularity;
pub use propagation::{
    standard_label_propagation, weighted_label_propagation, LabelState, PropagationConfig,
    PropagationMode, PropagationOutcome, WeightFunction,
};

use crate::error::Result;
use crate::graph::SimilarityGraph;
use crate::partition::Partition;

/// A detection algorithm together with its knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "lowercase")]
pub enum Detector {
    Cnm,
    Lp {
        mode: PropagationMode,
        sticky_ties: bool,
    },
    Wlp {
        mode: PropagationMode,
        weight: WeightFunction,
        sticky_ties: bool,
    },
}

impl Detector {
    /// Short stable name, e.g. `wlp-sync-exp-sticky`.
    pub fn label(&self) -> String {
        let ties = |s: bool| if s { "sticky" } else { "random" };
        match *self {
            Detector::Cnm => "cnm".to_string(),
            Detector::Lp { mode, sticky_ties } => {
                format!("lp-{}-{}", mode.name(), ties(sticky_ties))
            }
            Detector::Wlp {
                mode,
                weight,
                sticky_ties,
            } => format!(
                "wlp-{}-{}-{}",
                mode.name(),
                weight.name(),
                ties(sticky_ties)
            ),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Detector::Cnm => "cnm",
            Detector::Lp { .. } => "lp",
            Detector::Wlp { .. } => "wlp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub partition: Partition,
    pub iterations: usize,
    pub converged: bool,
    /// `None` when the graph has no edges.
    pub modularity: Option<f64>,
}

/// Run `detector` on `graph`; `seed` drives the propagation order and tie draws.
pub fn detect(
    graph: &SimilarityGraph,
    detector: &Detector,
    max_iters: usize,
    seed: u64,
) -> Result<Detection> {
    let config = |mode, sticky_ties| PropagationConfig {
        mode,
        max_iters,
        seed,
        sticky_ties,
        record_trajectory: false,
    };
    let (partition, iterations, converged) = match *detector {
        Detector::Cnm => {
            let out = cnm_greedy_modularity(graph);
            (out.partition, out.merges, true)
        }
        Detector::Lp { mode, sticky_ties } => {
            let out = standard_label_propagation(graph, &config(mode, sticky_ties));
            (out.partition, out.iterations, out.converged)
        }
        Detector::Wlp {
            mode,
            weight,
            sticky_ties,
        } => {
            let distances = all_pairs_distances(graph);
            let out =
                weighted_label_propagation(graph, weight, &distances, &config(mode, sticky_ties))?;
            (out.partition, out.iterations, out.converged)
        }
    };
    let modularity = if graph.edge_count() > 0 {
        Some(modularity(graph, &partition)?)
    } else {
        None
    };
    Ok(Detection {
        partition,
        iterations,
        converged,
        modularity,
    })
}
