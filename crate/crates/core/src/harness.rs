//! Experiment orchestration: repeated seeded runs of one algorithm and the
//! all-algorithm comparison protocol. Repeats run in parallel; each owns
//! its RNG stream, so scheduling cannot change results.

use crate::decoder::DecodeError;
use crate::metrics::{aggregate, compute_metrics, MetricsError, MetricsRecord, Summary};
use crate::model::{ModelError, ObjectiveParams, Workload};
use crate::optimizers::{
    baseline_allocate, run, Algorithm, EliminationRule, OptimizerConfig, OptimizerError,
};
use crate::rng::{purpose, substream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Full experiment configuration: optimizer knobs plus the repeat protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub nsa: usize,
    pub max_iterations: usize,
    pub ub: f64,
    pub w: f64,
    pub seed: u64,
    pub repeats: usize,
    pub elimination_rule: EliminationRule,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            nsa: 20,
            max_iterations: 100,
            ub: 10.0,
            w: ObjectiveParams::DEFAULT_W,
            seed: 0,
            repeats: 10,
            elimination_rule: EliminationRule::default(),
        }
    }
}

/// Best-ever fitness trace of one metaheuristic repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub algo: Algorithm,
    pub seed: u64,
    pub best_fitness: Vec<f64>,
}

/// All repeats of one algorithm on one workload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub algo: Algorithm,
    pub records: Vec<MetricsRecord>,
    pub summary: Summary,
    /// Present for metaheuristics, empty for baselines.
    pub convergence: Vec<ConvergenceSeries>,
}

/// One `RunResult` per algorithm, in `Algorithm::ALL` order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchResult {
    pub results: Vec<RunResult>,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Runs `cfg.repeats` seeded repeats of `algo`. Repeat `r` uses seed
/// `cfg.seed + r`.
pub fn run_experiment(
    workload: &Workload,
    algo: Algorithm,
    cfg: &ExperimentConfig,
) -> Result<RunResult, HarnessError> {
    if cfg.repeats == 0 {
        return Err(HarnessError::NoRepeats);
    }
    let params = ObjectiveParams::new(cfg.w)?;
    let repeats = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| {
            let seed = cfg.seed.wrapping_add(r as u64);
            match algo.as_metaheuristic() {
                Some(meta) => {
                    let config = OptimizerConfig {
                        nsa: cfg.nsa,
                        max_iterations: cfg.max_iterations,
                        ub: cfg.ub,
                        seed,
                        elimination_rule: cfg.elimination_rule,
                    };
                    let out = run(meta, workload, &config, &params)?;
                    Ok((seed, out.best_outcome, Some(out.history)))
                }
                None => {
                    let method = algo.as_baseline().expect("non-metaheuristics are baselines");
                    let mut rng = substream(seed, purpose::BASELINE, 0, 0);
                    let outcome = baseline_allocate(method, workload, &params, &mut rng)?;
                    Ok((seed, outcome, None))
                }
            }
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut records = Vec::with_capacity(repeats.len());
    let mut convergence = Vec::new();
    for (seed, outcome, history) in repeats {
        records.push(compute_metrics(algo, seed, &outcome));
        if let Some(best_fitness) = history {
            convergence.push(ConvergenceSeries {
                algo,
                seed,
                best_fitness,
            });
        }
    }
    records.sort_by_key(|r| r.seed);
    convergence.sort_by_key(|s| s.seed);
    let summary = aggregate(&records)?;
    Ok(RunResult {
        algo,
        records,
        summary,
        convergence,
    })
}

/// Runs every algorithm on the same workload with the same protocol.
pub fn bench_all(workload: &Workload, cfg: &ExperimentConfig) -> Result<BenchResult, HarnessError> {
    let results = Algorithm::ALL
        .iter()
        .map(|&algo| run_experiment(workload, algo, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchResult { results })
}
