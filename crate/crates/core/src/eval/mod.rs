//! Scoring partitions and running the benchmark experiments.

pub mod experiments;
pub mod nmi;
pub mod report;
pub mod stats;

pub use experiments::{
    run_mixing_sweep, run_sbm_benchmark, EpsilonStrategy, SbmBenchConfig, SbmPoint, SweepConfig,
};
pub use nmi::{nmi, NmiScore};
pub use report::{aggregate, AggregateRow, ExperimentReport, TrialRecord};
