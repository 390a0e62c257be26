//! Per-run metric records and cross-repeat aggregation.

use crate::decoder::DecodeOutcome;
use crate::optimizers::Algorithm;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The twelve reported values for one run. Ratio fields are `None` when
/// their denominator is zero; they are never NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub algo: Algorithm,
    pub seed: u64,
    pub objective: f64,
    pub profit: f64,
    pub cost: f64,
    pub pc_ratio: Option<f64>,
    pub satisfied_count: f64,
    /// Fraction in [0, 1].
    pub utilisation: f64,
    pub objective_per_allocation: Option<f64>,
    pub profit_per_allocation: Option<f64>,
    pub cost_per_allocation: Option<f64>,
    /// Objective divided by the utilisation expressed in percent.
    pub objective_per_utilisation: Option<f64>,
}

pub fn compute_metrics(algo: Algorithm, seed: u64, outcome: &DecodeOutcome) -> MetricsRecord {
    let satisfied = outcome.satisfied_count as f64;
    let ratio = |num: f64, den: f64| if den > 0.0 { Some(num / den) } else { None };
    MetricsRecord {
        algo,
        seed,
        objective: outcome.objective_value,
        profit: outcome.profit,
        cost: outcome.cost,
        pc_ratio: ratio(outcome.profit, outcome.cost),
        satisfied_count: satisfied,
        utilisation: outcome.utilisation,
        objective_per_allocation: ratio(outcome.objective_value, satisfied),
        profit_per_allocation: ratio(outcome.profit, satisfied),
        cost_per_allocation: ratio(outcome.cost, satisfied),
        objective_per_utilisation: ratio(outcome.objective_value, outcome.utilisation * 100.0),
    }
}

/// Arithmetic mean of every metric across repeats. Ratio metrics are
/// averaged as mean-of-per-run-ratios over the runs where they are defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub algo: Algorithm,
    pub repeats: usize,
    pub objective: f64,
    pub profit: f64,
    pub cost: f64,
    pub pc_ratio: Option<f64>,
    pub satisfied_count: f64,
    pub utilisation: f64,
    pub objective_per_allocation: Option<f64>,
    pub profit_per_allocation: Option<f64>,
    pub cost_per_allocation: Option<f64>,
    pub objective_per_utilisation: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("cannot aggregate an empty record list")]
    Empty,
    #[error("cannot aggregate across algorithms ({first} and {second})")]
    MixedAlgorithms { first: Algorithm, second: Algorithm },
}

pub fn aggregate(records: &[MetricsRecord]) -> Result<Summary, MetricsError> {
    let first = records.first().ok_or(MetricsError::Empty)?;
    if let Some(mixed) = records.iter().find(|r| r.algo != first.algo) {
        return Err(MetricsError::MixedAlgorithms {
            first: first.algo,
            second: mixed.algo,
        });
    }
    let mean = |f: fn(&MetricsRecord) -> f64| {
        records.iter().map(f).sum::<f64>() / records.len() as f64
    };
    let mean_opt = |f: fn(&MetricsRecord) -> Option<f64>| {
        let present: Vec<f64> = records.iter().filter_map(f).collect();
        if present.is_empty() {
            None
        } else {
            Some(present.iter().sum::<f64>() / present.len() as f64)
        }
    };
    Ok(Summary {
        algo: first.algo,
        repeats: records.len(),
        objective: mean(|r| r.objective),
        profit: mean(|r| r.profit),
        cost: mean(|r| r.cost),
        pc_ratio: mean_opt(|r| r.pc_ratio),
        satisfied_count: mean(|r| r.satisfied_count),
        utilisation: mean(|r| r.utilisation),
        objective_per_allocation: mean_opt(|r| r.objective_per_allocation),
        profit_per_allocation: mean_opt(|r| r.profit_per_allocation),
        cost_per_allocation: mean_opt(|r| r.cost_per_allocation),
        objective_per_utilisation: mean_opt(|r| r.objective_per_utilisation),
    })
}
