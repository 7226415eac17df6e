//! Seeded multi-trial experiment drivers.
//!
//! Seeds: every experiment point `k` gets `derive_seed(seed, GRID, k)`, each
//! trial `t` within it `derive_seed(point, TRIAL, t)`, and the trial's data
//! and detector seeds are the `GENERATE` and `DETECT` children of that.

use serde::{Deserialize, Serialize};

use crate::detect::{detect, Detector};
use crate::error::{Error, Result};
use crate::eval::nmi::nmi;
use crate::eval::report::{ExperimentReport, TrialRecord};
use crate::expectation::expected_overall_similarity;
use crate::ranking::{generate_rankings, RankingConfig};
use crate::sbm::{generate_sbm, SbmConfig};
use crate::seed::{derive_seed, stream};
use crate::similarity::{build_similarity_matrix, threshold_graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EpsilonStrategy {
    /// `1 - (N + 1) / (3N)`, the similarity of a uniformly random pair.
    ExpectedSimilarity,
    Fixed(f64),
}

impl EpsilonStrategy {
    pub fn resolve(self, items: usize) -> Result<f64> {
        match self {
            EpsilonStrategy::ExpectedSimilarity => expected_overall_similarity(items),
            EpsilonStrategy::Fixed(e) if (0.0..=1.0).contains(&e) => Ok(e),
            EpsilonStrategy::Fixed(e) => Err(Error::config(format!("epsilon {e} outside [0, 1]"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub category_size: usize,
    pub categories: usize,
    pub mixing: Vec<usize>,
    /// Voters per item; `V = round(multiplier * N)`, at least 1.
    pub multipliers: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: EpsilonStrategy,
    pub detector: Detector,
    pub max_iters: usize,
}

#[derive(Debug, Clone, Copy)]
struct Task {
    point: usize,
    trial: usize,
}

fn run_tasks<T, F>(tasks: Vec<Task>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Task) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        tasks.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    tasks.into_iter().map(f).collect()
}

fn tasks(points: usize, trials: usize) -> Vec<Task> {
    (0..points)
        .flat_map(|point| (0..trials).map(move |trial| Task { point, trial }))
        .collect()
}

fn trial_seed(seed: u64, task: Task) -> u64 {
    derive_seed(
        derive_seed(seed, stream::GRID, task.point as u64),
        stream::TRIAL,
        task.trial as u64,
    )
}

/// NMI of weighted label propagation against the planted categories over a
/// grid of mixing values and voter multipliers.
pub fn run_mixing_sweep(config: &SweepConfig) -> Result<ExperimentReport> {
    let n = config.category_size * config.categories;
    let epsilon = config.epsilon.resolve(n)?;
    let points: Vec<(usize, f64)> = config
        .mixing
        .iter()
        .flat_map(|&p| config.multipliers.iter().map(move |&m| (p, m)))
        .collect();
    for &(p, m) in &points {
        if m.is_nan() || m <= 0.0 {
            return Err(Error::config(format!(
                "voter multiplier {m} must be positive"
            )));
        }
        RankingConfig::new(config.categories, config.category_size, p, 1, 0)?;
    }
    let records = run_tasks(tasks(points.len(), config.trials), |task| {
        let (p, m) = points[task.point];
        let seed = trial_seed(config.seed, task);
        let voters = ((m * n as f64).round() as usize).max(1);
        let rc = RankingConfig::new(
            config.categories,
            config.category_size,
            p,
            voters,
            derive_seed(seed, stream::GENERATE, 0),
        )?;
        let (rankings, truth) = generate_rankings(&rc)?;
        let graph = threshold_graph(&build_similarity_matrix(&rankings), epsilon);
        let found = detect(
            &graph,
            &config.detector,
            config.max_iters,
            derive_seed(seed, stream::DETECT, 0),
        )?;
        Ok(TrialRecord {
            config: format!("p={p} mult={m}"),
            algo: config.detector.label(),
            trial: task.trial,
            seed,
            nmi: nmi(&truth.to_partition(), &found.partition)?.value,
            modularity: found.modularity,
            communities: found.partition.count(),
            iterations: found.iterations,
            converged: found.converged,
            p: Some(p),
            multiplier: Some(m),
            edge_ratio: Some(graph.edge_ratio()),
        })
    })?;
    Ok(ExperimentReport::from_trials(records))
}

/// Block structure of one benchmark point; the seed comes from the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmPoint {
    pub communities: usize,
    pub size: usize,
    pub p_in: f64,
    pub p_out: f64,
}

impl SbmPoint {
    pub fn label(&self) -> String {
        format!(
            "pin={} pout={} k={} s={}",
            self.p_in, self.p_out, self.communities, self.size
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmBenchConfig {
    pub grid: Vec<SbmPoint>,
    pub detectors: Vec<Detector>,
    pub trials: usize,
    pub seed: u64,
    pub max_iters: usize,
}

/// Every detector sees the same sampled graph within a trial.
pub fn run_sbm_benchmark(config: &SbmBenchConfig) -> Result<ExperimentReport> {
    let per_task = run_tasks(tasks(config.grid.len(), config.trials), |task| {
        let point = config.grid[task.point];
        let seed = trial_seed(config.seed, task);
        let (graph, truth) = generate_sbm(&SbmConfig::new(
            point.communities,
            point.size,
            point.p_in,
            point.p_out,
            derive_seed(seed, stream::GENERATE, 0),
        ))?;
        let truth = truth.to_partition();
        config
            .detectors
            .iter()
            .enumerate()
            .map(|(k, detector)| {
                let found = detect(
                    &graph,
                    detector,
                    config.max_iters,
                    derive_seed(seed, stream::DETECT, k as u64),
                )?;
                Ok(TrialRecord {
                    config: point.label(),
                    algo: detector.label(),
                    trial: task.trial,
                    seed,
                    nmi: nmi(&truth, &found.partition)?.value,
                    modularity: found.modularity,
                    communities: found.partition.count(),
                    iterations: found.iterations,
                    converged: found.converged,
                    p: None,
                    multiplier: None,
                    edge_ratio: Some(graph.edge_ratio()),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ExperimentReport::from_trials(
        per_task.into_iter().flatten().collect(),
    ))
}
