//! The improved grey wolf optimizer, vanilla GWO, and the four
//! order/greedy baselines behind one optimizer contract.

mod baselines;
mod gwa;
mod gwo;

pub use baselines::{baseline_allocate, BaselineMethod};
pub use gwa::{
    bimetric_initialise, gwa_initialise, gwa_step, hierarchy_candidates, EliminationReport,
    RestartKind, StepReport, WolfUpdate,
};
pub use gwo::gwo_step;

use crate::decoder::{decode, decode_into, DecodeError, DecodeOutcome, PositionVector};
use crate::digital_object::DoRegistry;
use crate::model::{ObjectiveParams, Workload};
use crate::rng::{purpose, substream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Everything the benchmark harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gwa,
    Gwo,
    Ran,
    HitIhc,
    GreP,
    GreO,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Gwa,
        Algorithm::Gwo,
        Algorithm::Ran,
        Algorithm::HitIhc,
        Algorithm::GreP,
        Algorithm::GreO,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gwa => "gwa",
            Algorithm::Gwo => "gwo",
            Algorithm::Ran => "ran",
            Algorithm::HitIhc => "hit-ihc",
            Algorithm::GreP => "gre-p",
            Algorithm::GreO => "gre-o",
        }
    }

    pub fn as_metaheuristic(self) -> Option<Metaheuristic> {
        match self {
            Algorithm::Gwa => Some(Metaheuristic::Gwa),
            Algorithm::Gwo => Some(Metaheuristic::Gwo),
            _ => None,
        }
    }

    pub fn as_baseline(self) -> Option<BaselineMethod> {
        match self {
            Algorithm::Ran => Some(BaselineMethod::Ran),
            Algorithm::HitIhc => Some(BaselineMethod::HitIhc),
            Algorithm::GreP => Some(BaselineMethod::GreP),
            Algorithm::GreO => Some(BaselineMethod::GreO),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected one of gwa, gwo, ran, hit-ihc, gre-p, gre-o)"))
    }
}

/// The two population-based optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metaheuristic {
    Gwa,
    Gwo,
}

/// Direction of the lifetime-elimination decider. `Rationale` fires the
/// elimination with probability equal to the threshold (rising over the
/// run); `Literal` fires when the decider is at or above the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EliminationRule {
    #[default]
    Rationale,
    Literal,
}

impl EliminationRule {
    pub fn name(self) -> &'static str {
        match self {
            EliminationRule::Rationale => "rationale",
            EliminationRule::Literal => "literal",
        }
    }

    pub(crate) fn fires(self, decider: f64, threshold: f64) -> bool {
        match self {
            EliminationRule::Rationale => decider < threshold,
            EliminationRule::Literal => decider >= threshold,
        }
    }
}

impl fmt::Display for EliminationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EliminationRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rationale" => Ok(EliminationRule::Rationale),
            "literal" => Ok(EliminationRule::Literal),
            other => Err(format!(
                "unknown elimination rule `{other}` (expected rationale or literal)"
            )),
        }
    }
}

/// Smallest population that supports the seven-leader hierarchy plus at
/// least one follower.
pub const MIN_POPULATION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub nsa: usize,
    pub max_iterations: usize,
    pub ub: f64,
    pub seed: u64,
    pub elimination_rule: EliminationRule,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            nsa: 20,
            max_iterations: 100,
            ub: 10.0,
            seed: 0,
            elimination_rule: EliminationRule::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error("population must have at least {MIN_POPULATION} wolves (seven leaders plus a follower), got {nsa}")]
    PopulationTooSmall { nsa: usize },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Shared evaluation context: one prototype registry, cloned per decode so
/// evaluations are independent and parallel-safe.
pub(crate) struct EvalContext<'a> {
    workload: &'a Workload,
    params: &'a ObjectiveParams,
    prototype: DoRegistry,
}

impl<'a> EvalContext<'a> {
    pub(crate) fn new(workload: &'a Workload, params: &'a ObjectiveParams) -> Self {
        Self {
            workload,
            params,
            prototype: DoRegistry::from_workload(workload),
        }
    }

    pub(crate) fn fitness(&self, pos: &PositionVector) -> Result<f64, DecodeError> {
        let mut registry = self.prototype.clone();
        Ok(decode_into(pos, self.workload, self.params, &mut registry)?.objective_value)
    }
}

/// Fraction of a wolf's lifetime already elapsed at iteration `ci`.
fn lifetime_fraction(ci: usize, mi: usize, bl: usize) -> f64 {
    if mi <= bl {
        return 1.0;
    }
    (ci - bl) as f64 / (mi - bl) as f64
}

/// Per-wolf encircling coefficient: linear from 2 at the wolf's lifetime
/// begin down to 0 at the final iteration.
pub fn encircling_coefficient(ci: usize, mi: usize, bl: usize) -> f64 {
    2.0 - 2.0 * lifetime_fraction(ci, mi, bl)
}

/// Per-wolf delta-leader weight: linear from 1 at the wolf's lifetime begin
/// down to 0 at the final iteration.
pub fn delta_weight(ci: usize, mi: usize, bl: usize) -> f64 {
    1.0 - lifetime_fraction(ci, mi, bl)
}

/// Elimination threshold: linear from 0 at the first iteration to 1 at the
/// last.
pub fn elimination_threshold(ci: usize, mi: usize) -> f64 {
    if mi == 0 {
        return 1.0;
    }
    ci as f64 / mi as f64
}

/// Population indices sorted best-first by (fitness, index).
pub(crate) fn ranked_indices(fitnesses: &[f64]) -> Vec<usize> {
    let mut ranked: Vec<usize> = (0..fitnesses.len()).collect();
    ranked.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]).then(a.cmp(&b)));
    ranked
}

/// Index of the single worst wolf; ties broken by lowest index.
pub(crate) fn worst_index(fitnesses: &[f64]) -> usize {
    let mut worst = 0;
    for (i, &fit) in fitnesses.iter().enumerate() {
        if fit > fitnesses[worst] {
            worst = i;
        }
    }
    worst
}

/// Mutable optimizer state shared by the two metaheuristics.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    population: Vec<PositionVector>,
    fitnesses: Vec<f64>,
    /// Lifetime-begin iteration of each wolf; reset on elimination.
    bl: Vec<usize>,
    /// Best-first population ranking from the latest evaluation.
    leaders: Vec<usize>,
    ci: usize,
    mi: usize,
    ub: f64,
    seed: u64,
    elimination_rule: EliminationRule,
    best_position: PositionVector,
    best_fitness: f64,
    history: Vec<f64>,
}

impl OptimizerState {
    /// Builds and evaluates the initial population. The improved optimizer
    /// gets the density-aware initialiser; the vanilla one gets the shared
    /// profit-cost oriented draws without merging, so the density merge
    /// stays part of what the comparison measures.
    pub fn new(
        algo: Metaheuristic,
        workload: &Workload,
        config: &OptimizerConfig,
        params: &ObjectiveParams,
    ) -> Result<Self, OptimizerError> {
        if config.nsa < MIN_POPULATION {
            return Err(OptimizerError::PopulationTooSmall { nsa: config.nsa });
        }
        let mut rng = substream(config.seed, purpose::INITIALISER, 0, 0);
        let population = match algo {
            Metaheuristic::Gwa => {
                gwa_initialise(config.nsa, workload, config.ub, params, &mut rng)
            }
            Metaheuristic::Gwo => {
                gwa::bimetric_initialise(config.nsa, workload, config.ub, params, &mut rng)
            }
        };
        let ctx = EvalContext::new(workload, params);
        let fitnesses = population
            .par_iter()
            .map(|pos| ctx.fitness(pos))
            .collect::<Result<Vec<_>, _>>()?;
        let leaders = ranked_indices(&fitnesses);
        let best = leaders[0];
        let best_fitness = fitnesses[best];
        let best_position = population[best].clone();
        let history = vec![best_fitness];
        Ok(Self {
            population,
            fitnesses,
            bl: vec![0; config.nsa],
            leaders,
            ci: 0,
            mi: config.max_iterations,
            ub: config.ub,
            seed: config.seed,
            elimination_rule: config.elimination_rule,
            best_position,
            best_fitness,
            history,
        })
    }

    pub fn population(&self) -> &[PositionVector] {
        &self.population
    }

    pub fn fitnesses(&self) -> &[f64] {
        &self.fitnesses
    }

    /// Best-first ranking of the current population.
    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    pub fn lifetime_begin(&self) -> &[usize] {
        &self.bl
    }

    pub fn current_iteration(&self) -> usize {
        self.ci
    }

    pub fn max_iterations(&self) -> usize {
        self.mi
    }

    pub fn ub(&self) -> f64 {
        self.ub
    }

    pub(crate) fn seed(&self) -> u64 {
        self.seed
    }

    pub(crate) fn elimination_rule(&self) -> EliminationRule {
        self.elimination_rule
    }

    pub(crate) fn set_lifetime_begin(&mut self, wolf: usize, iteration: usize) {
        self.bl[wolf] = iteration;
    }

    pub fn best_position(&self) -> &PositionVector {
        &self.best_position
    }

    pub fn best_fitness(&self) -> f64 {
        self.best_fitness
    }

    /// Best-ever fitness after initialisation and after each iteration.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub(crate) fn apply_evaluations(&mut self, population: Vec<PositionVector>, fitnesses: Vec<f64>) {
        self.population = population;
        self.fitnesses = fitnesses;
        self.leaders = ranked_indices(&self.fitnesses);
        let best = self.leaders[0];
        if self.fitnesses[best] < self.best_fitness {
            self.best_fitness = self.fitnesses[best];
            self.best_position = self.population[best].clone();
        }
        self.ci += 1;
        self.history.push(self.best_fitness);
    }

    /// Test-only access used to drive the optimizer into specific states.
    #[doc(hidden)]
    pub fn force_state(&mut self, population: Vec<PositionVector>, fitnesses: Vec<f64>, ci: usize) {
        assert_eq!(population.len(), fitnesses.len());
        self.leaders = ranked_indices(&fitnesses);
        self.population = population;
        self.fitnesses = fitnesses;
        self.bl = vec![0; self.population.len()];
        self.ci = ci;
    }
}

/// Result of one optimizer run: the best wolf ever observed, decoded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutput {
    pub best_position: PositionVector,
    pub best_outcome: DecodeOutcome,
    /// Best-ever fitness after initialisation and after each iteration
    /// (`max_iterations + 1` entries, non-increasing).
    pub history: Vec<f64>,
}

/// Runs a metaheuristic to completion. Both optimizers share the
/// profit-cost oriented initial draws; only the improved one adds density
/// merging, the seven-leader hierarchy, and elimination.
pub fn run(
    algo: Metaheuristic,
    workload: &Workload,
    config: &OptimizerConfig,
    params: &ObjectiveParams,
) -> Result<RunOutput, OptimizerError> {
    let mut state = OptimizerState::new(algo, workload, config, params)?;
    for _ in 0..config.max_iterations {
        match algo {
            Metaheuristic::Gwa => {
                gwa_step(&mut state, workload, params)?;
            }
            Metaheuristic::Gwo => gwo_step(&mut state, workload, params)?,
        }
    }
    let best_outcome = decode(&state.best_position, workload, params)?;
    Ok(RunOutput {
        best_position: state.best_position,
        best_outcome,
        history: state.history,
    })
}
