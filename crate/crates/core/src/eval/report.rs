//! Per-trial records and their aggregates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::stats::{mean, std_dev};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Experiment point, e.g. `pin=0.7 pout=0.01 k=10 s=5`.
    pub config: String,
    pub algo: String,
    pub trial: usize,
    pub seed: u64,
    pub nmi: f64,
    pub modularity: Option<f64>,
    pub communities: usize,
    pub iterations: usize,
    pub converged: bool,
    pub p: Option<usize>,
    pub multiplier: Option<f64>,
    pub edge_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub config: String,
    pub algo: String,
    pub trials: usize,
    pub mean_nmi: f64,
    pub sd_nmi: f64,
    /// Mean over trials whose graph had edges; `None` if none did.
    pub mean_modularity: Option<f64>,
    pub mean_communities: f64,
    pub converged_fraction: f64,
    pub p: Option<usize>,
    pub multiplier: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub trials: Vec<TrialRecord>,
    pub aggregates: Vec<AggregateRow>,
}

impl ExperimentReport {
    pub fn from_trials(trials: Vec<TrialRecord>) -> Self {
        let aggregates = aggregate(&trials);
        ExperimentReport { trials, aggregates }
    }

    pub fn find(&self, config: &str, algo: &str) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|r| r.config == config && r.algo == algo)
    }

    pub fn trials_for<'a>(
        &'a self,
        config: &'a str,
        algo: &'a str,
    ) -> impl Iterator<Item = &'a TrialRecord> + 'a {
        self.trials
            .iter()
            .filter(move |t| t.config == config && t.algo == algo)
    }

    pub fn write_trials_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for t in &self.trials {
            w.serialize(t)?;
        }
        w.flush().map_err(|e| Error::io("<trials csv>", e))?;
        Ok(())
    }

    pub fn write_aggregate_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for a in &self.aggregates {
            w.serialize(a)?;
        }
        w.flush().map_err(|e| Error::io("<aggregate csv>", e))?;
        Ok(())
    }

    /// One table per config with algorithms as columns.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let mut configs: Vec<&str> = Vec::new();
        for a in &self.aggregates {
            if !configs.contains(&a.config.as_str()) {
                configs.push(&a.config);
            }
        }
        for config in configs {
            let rows: Vec<&AggregateRow> = self
                .aggregates
                .iter()
                .filter(|a| a.config == config)
                .collect();
            let _ = writeln!(out, "**{config}** ({} trials)\n", rows[0].trials);
            let _ = write!(out, "| |");
            for r in &rows {
                let _ = write!(out, " {} |", r.algo);
            }
            let _ = write!(out, "\n|---|");
            for _ in &rows {
                let _ = write!(out, "---|");
            }
            out.push('\n');
            let line = |out: &mut String, name: &str, f: &dyn Fn(&AggregateRow) -> String| {
                let _ = write!(out, "| {name} |");
                for r in &rows {
                    let _ = write!(out, " {} |", f(r));
                }
                out.push('\n');
            };
            line(&mut out, "Avg Num of Categories", &|r| {
                format!("{:.2}", r.mean_communities)
            });
            line(&mut out, "Avg NMI with Truth", &|r| {
                format!("{:.4}", r.mean_nmi)
            });
            line(&mut out, "Avg Modularity", &|r| {
                r.mean_modularity
                    .map_or("n/a".into(), |q| format!("{q:.4}"))
            });
            out.push('\n');
        }
        out
    }
}

/// Group by `(config, algo)` in first-seen order and average.
pub fn aggregate(trials: &[TrialRecord]) -> Vec<AggregateRow> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for t in trials {
        let key = (t.config.as_str(), t.algo.as_str());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(config, algo)| {
            let group: Vec<&TrialRecord> = trials
                .iter()
                .filter(|t| t.config == config && t.algo == algo)
                .collect();
            let nmis: Vec<f64> = group.iter().map(|t| t.nmi).collect();
            let qs: Vec<f64> = group.iter().filter_map(|t| t.modularity).collect();
            let counts: Vec<f64> = group.iter().map(|t| t.communities as f64).collect();
            AggregateRow {
                config: config.to_string(),
                algo: algo.to_string(),
                trials: group.len(),
                mean_nmi: mean(&nmis),
                sd_nmi: std_dev(&nmis),
                mean_modularity: (!qs.is_empty()).then(|| mean(&qs)),
                mean_communities: mean(&counts),
                converged_fraction: group.iter().filter(|t| t.converged).count() as f64
                    / group.len() as f64,
                p: group[0].p,
                multiplier: group[0].multiplier,
            }
        })
        .collect()
}
