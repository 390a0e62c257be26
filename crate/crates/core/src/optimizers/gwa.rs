//! The improved optimizer: bimetric density-aware initialisation, the
//! seven-leader greedy social hierarchy, and lifetime-based elimination of
//! the worst wolf.

use super::gwo::adjust_leader;
use super::{
    delta_weight, elimination_threshold, encircling_coefficient, worst_index, EvalContext,
    OptimizerError, OptimizerState,
};
use crate::decoder::PositionVector;
use crate::model::{objective, per_service_cost, ObjectiveParams, Scenario, Workload};
use crate::rng::{purpose, substream};
use rand::Rng;
use rayon::prelude::*;

/// Per-service scenario preference: true when the contention-free
/// per-service objective is lower (or equal) in the rich scenario.
fn rich_preference(workload: &Workload, params: &ObjectiveParams) -> Vec<bool> {
    workload
        .services
        .iter()
        .map(|service| {
            let rich = objective(
                per_service_cost(workload, service, Scenario::Rich),
                service.profit.at(Scenario::Rich),
                params,
            );
            let scarce = objective(
                per_service_cost(workload, service, Scenario::Scarce),
                service.profit.at(Scenario::Scarce),
                params,
            );
            rich <= scarce
        })
        .collect()
}

fn bimetric_draws(
    count: usize,
    prefer_rich: &[bool],
    ub: f64,
    rng: &mut impl Rng,
) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            prefer_rich
                .iter()
                .map(|&rich| {
                    if rich {
                        rng.gen_range(0.0..ub / 2.0)
                    } else {
                        rng.gen_range(ub / 2.0..=ub)
                    }
                })
                .collect()
        })
        .collect()
}

/// Profit-cost oriented initial population without density merging: the
/// fairness baseline shared with the other metaheuristic. Each component is
/// drawn from the half of `[0, ub]` that maps to the scenario with the
/// lower contention-free per-service objective.
pub fn bimetric_initialise(
    nsa: usize,
    workload: &Workload,
    ub: f64,
    params: &ObjectiveParams,
    rng: &mut impl Rng,
) -> Vec<PositionVector> {
    let prefer_rich = rich_preference(workload, params);
    bimetric_draws(nsa, &prefer_rich, ub, rng)
        .into_iter()
        .map(|values| PositionVector::new(values, ub).expect("initialiser draws are in range"))
        .collect()
}

/// Bimetric-balanced, density-aware initial population.
///
/// Draws ceil(1.5 * nsa) vectors as in [`bimetric_initialise`], then
/// repeatedly merges the closest pair (L2) into its componentwise mean
/// until exactly `nsa` remain.
pub fn gwa_initialise(
    nsa: usize,
    workload: &Workload,
    ub: f64,
    params: &ObjectiveParams,
    rng: &mut impl Rng,
) -> Vec<PositionVector> {
    let prefer_rich = rich_preference(workload, params);
    let pool_size = (3 * nsa + 1) / 2; // ceil(1.5 * nsa)
    let mut pool = bimetric_draws(pool_size, &prefer_rich, ub, rng);

    while pool.len() > nsa {
        let (i, j) = closest_pair(&pool);
        let mean: Vec<f64> = pool[i]
            .iter()
            .zip(&pool[j])
            .map(|(&a, &b)| (a + b) / 2.0)
            .collect();
        pool.remove(j);
        pool.remove(i);
        pool.push(mean);
    }

    pool.into_iter()
        .map(|values| PositionVector::new(values, ub).expect("initialiser draws are in range"))
        .collect()
}

/// Lexicographically first pair (i, j), i < j, with minimal L2 distance.
fn closest_pair(pool: &[Vec<f64>]) -> (usize, usize) {
    let mut best = (0, 1);
    let mut best_dist = f64::INFINITY;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            let dist: f64 = pool[i]
                .iter()
                .zip(&pool[j])
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if dist < best_dist {
                best_dist = dist;
                best = (i, j);
            }
        }
    }
    best
}

/// The four alternative leader groupings, combined from the seven adjusted
/// leader positions (best first). The delta group's influence is damped by
/// `delta_w`; weights sum to `2 + delta_w`.
pub fn hierarchy_candidates(adjusted: &[Vec<f64>], delta_w: f64) -> [Vec<f64>; 4] {
    assert_eq!(adjusted.len(), 7, "the hierarchy uses seven leaders");
    let n = adjusted[0].len();
    let denom = 2.0 + delta_w;
    let mut candidates = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for d in 0..n {
        let pair = |a: usize, b: usize| (adjusted[a][d] + adjusted[b][d]) / 2.0;
        let triple = |a: usize, b: usize, c: usize| {
            (adjusted[a][d] + adjusted[b][d] + adjusted[c][d]) / 3.0
        };
        candidates[0][d] = (adjusted[0][d] + pair(1, 2) + triple(3, 4, 5) * delta_w) / denom;
        candidates[1][d] = (adjusted[0][d] + pair(2, 3) + triple(4, 5, 6) * delta_w) / denom;
        candidates[2][d] = (adjusted[1][d] + pair(2, 3) + triple(4, 5, 6) * delta_w) / denom;
        candidates[3][d] = (pair(0, 1) + pair(2, 3) + triple(4, 5, 6) * delta_w) / denom;
    }
    candidates
}

/// How an eliminated wolf was restarted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartKind {
    /// Fresh uniform vector in `[0, ub]^N`.
    Fresh,
    /// Opposition `lb + ub - x` of a surviving wolf's position.
    Opposition { survivor: usize },
}

/// What happened to the worst wolf this iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EliminationReport {
    Kept {
        wolf: usize,
        decider: f64,
        threshold: f64,
    },
    Eliminated {
        wolf: usize,
        restart: RestartKind,
    },
}

/// One hierarchy update event: the four candidate fitnesses and the pick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WolfUpdate {
    pub wolf: usize,
    pub candidate_fitnesses: [f64; 4],
    pub chosen: usize,
    pub chosen_fitness: f64,
}

/// Trace of one `gwa_step`, used by tests and diagnostics.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub updates: Vec<WolfUpdate>,
    pub elimination: EliminationReport,
}

enum WolfOutcome {
    Kept { decider: f64, threshold: f64 },
    Replaced {
        pos: PositionVector,
        fit: f64,
        restart: RestartKind,
    },
    Updated {
        pos: PositionVector,
        fit: f64,
        update: WolfUpdate,
    },
}

/// One improved-optimizer iteration: the unique worst wolf faces the
/// lifetime elimination decider; every other wolf greedily picks the best
/// of the four seven-leader hierarchy candidates.
pub fn gwa_step(
    state: &mut OptimizerState,
    workload: &Workload,
    params: &ObjectiveParams,
) -> Result<StepReport, OptimizerError> {
    let ctx = EvalContext::new(workload, params);
    let ci = state.current_iteration();
    let mi = state.max_iterations();
    let ub = state.ub();
    let nsa = state.population().len();
    let threshold = elimination_threshold(ci, mi);
    let worst = worst_index(state.fitnesses());
    let leader_positions: Vec<&PositionVector> = state.leaders()[..7]
        .iter()
        .map(|&idx| &state.population()[idx])
        .collect();

    let outcomes = (0..nsa)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(state.seed(), purpose::WOLF, ci, i);
            if i == worst {
                let decider: f64 = rng.gen();
                if !state.elimination_rule().fires(decider, threshold) {
                    return Ok(WolfOutcome::Kept { decider, threshold });
                }
                let choice: f64 = rng.gen();
                let (values, restart) = if choice <= 0.5 {
                    let values = (0..state.population()[i].len())
                        .map(|_| rng.gen_range(0.0..=ub))
                        .collect::<Vec<_>>();
                    (values, RestartKind::Fresh)
                } else {
                    let pick = rng.gen_range(0..nsa - 1);
                    let survivor = if pick >= worst { pick + 1 } else { pick };
                    let values = state.population()[survivor]
                        .values()
                        .iter()
                        .map(|&v| ub - v)
                        .collect::<Vec<_>>();
                    (values, RestartKind::Opposition { survivor })
                };
                let pos = PositionVector::new(values, ub).expect("restart draws are in range");
                let fit = ctx.fitness(&pos)?;
                Ok(WolfOutcome::Replaced { pos, fit, restart })
            } else {
                let bl = state.lifetime_begin()[i];
                let a = encircling_coefficient(ci, mi, bl);
                let dw = delta_weight(ci, mi, bl);
                let x = state.population()[i].values();
                let adjusted: Vec<Vec<f64>> = leader_positions
                    .iter()
                    .map(|leader| adjust_leader(leader.values(), x, a, &mut rng))
                    .collect();
                let candidates = hierarchy_candidates(&adjusted, dw);
                let mut fits = [0.0; 4];
                let mut positions = Vec::with_capacity(4);
                for (c, candidate) in candidates.into_iter().enumerate() {
                    let values: Vec<f64> =
                        candidate.into_iter().map(|v| v.clamp(0.0, ub)).collect();
                    let pos =
                        PositionVector::new(values, ub).expect("clamped components are in range");
                    fits[c] = ctx.fitness(&pos)?;
                    positions.push(pos);
                }
                let mut chosen = 0;
                for c in 1..4 {
                    if fits[c] < fits[chosen] {
                        chosen = c;
                    }
                }
                let pos = positions.swap_remove(chosen);
                Ok(WolfOutcome::Updated {
                    pos,
                    fit: fits[chosen],
                    update: WolfUpdate {
                        wolf: i,
                        candidate_fitnesses: fits,
                        chosen,
                        chosen_fitness: fits[chosen],
                    },
                })
            }
        })
        .collect::<Result<Vec<_>, OptimizerError>>()?;

    let mut population = state.population().to_vec();
    let mut fitnesses = state.fitnesses().to_vec();
    let mut updates = Vec::with_capacity(nsa - 1);
    let mut elimination = EliminationReport::Kept {
        wolf: worst,
        decider: f64::NAN,
        threshold,
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            WolfOutcome::Kept { decider, threshold } => {
                elimination = EliminationReport::Kept {
                    wolf: i,
                    decider,
                    threshold,
                };
            }
            WolfOutcome::Replaced { pos, fit, restart } => {
                population[i] = pos;
                fitnesses[i] = fit;
                state.set_lifetime_begin(i, ci);
                elimination = EliminationReport::Eliminated { wolf: i, restart };
            }
            WolfOutcome::Updated { pos, fit, update } => {
                population[i] = pos;
                fitnesses[i] = fit;
                updates.push(update);
            }
        }
    }
    state.apply_evaluations(population, fitnesses);
    Ok(StepReport {
        updates,
        elimination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::{EliminationRule, Metaheuristic, OptimizerConfig};
    use crate::rng::{purpose, substream};
    use crate::testutil::{contention_workload_for_opt, single_kind_workload};

    #[test]
    fn initialiser_returns_exactly_nsa_vectors() {
        let workload = contention_workload_for_opt(5, 2);
        let params = ObjectiveParams::default();
        for nsa in [8, 20, 21] {
            let mut rng = substream(1, purpose::INITIALISER, 0, 0);
            let population = gwa_initialise(nsa, &workload, 10.0, &params, &mut rng);
            assert_eq!(population.len(), nsa);
            for pos in &population {
                assert_eq!(pos.len(), workload.service_count());
                for &v in pos.values() {
                    assert!((0.0..=10.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn initialiser_places_components_in_the_cheaper_half() {
        // Rich objective -45 vs scarce -28 on this fixture, so every
        // component lands in the rich half [0, 5).
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let mut rng = substream(3, purpose::INITIALISER, 0, 0);
        let population = gwa_initialise(8, &workload, 10.0, &params, &mut rng);
        for pos in &population {
            assert!(pos.values()[0] < 5.0);
        }
    }

    #[test]
    fn merging_collapses_the_closest_pair() {
        let pool = vec![
            vec![0.0, 0.0],
            vec![4.0, 4.0],
            vec![4.1, 4.0],
            vec![9.0, 9.0],
        ];
        assert_eq!(closest_pair(&pool), (1, 2));
    }

    #[test]
    fn identical_adjusted_leaders_fix_every_candidate() {
        let p = vec![1.5, 7.25, 3.0];
        let adjusted: Vec<Vec<f64>> = (0..7).map(|_| p.clone()).collect();
        for dw in [0.0, 0.35, 1.0] {
            for candidate in hierarchy_candidates(&adjusted, dw) {
                assert_eq!(candidate, p);
            }
        }
    }

    #[test]
    fn opposition_restart_reflects_within_bounds() {
        // lb = 0, ub = 10: component 3 maps to 7.
        assert_eq!(10.0 - 3.0, 7.0);
    }

    #[test]
    fn greedy_choice_dominates_all_candidates() {
        let workload = contention_workload_for_opt(10, 31);
        let params = ObjectiveParams::default();
        let config = OptimizerConfig {
            nsa: 9,
            max_iterations: 8,
            seed: 5,
            ..OptimizerConfig::default()
        };
        let mut state = OptimizerState::new(Metaheuristic::Gwa, &workload, &config, &params).unwrap();
        let mut events = 0;
        for _ in 0..config.max_iterations {
            let report = gwa_step(&mut state, &workload, &params).unwrap();
            for update in &report.updates {
                events += 1;
                for &fit in &update.candidate_fitnesses {
                    assert!(update.chosen_fitness <= fit);
                }
            }
        }
        assert!(events > 0);
    }

    #[test]
    fn elimination_targets_only_the_worst_wolf() {
        let workload = contention_workload_for_opt(6, 13);
        let params = ObjectiveParams::default();
        let config = OptimizerConfig {
            nsa: 8,
            max_iterations: 10,
            seed: 21,
            ..OptimizerConfig::default()
        };
        let mut state = OptimizerState::new(Metaheuristic::Gwa, &workload, &config, &params).unwrap();
        for _ in 0..config.max_iterations {
            let worst_before = worst_index(state.fitnesses());
            let report = gwa_step(&mut state, &workload, &params).unwrap();
            match report.elimination {
                EliminationReport::Kept { wolf, .. } => assert_eq!(wolf, worst_before),
                EliminationReport::Eliminated { wolf, .. } => assert_eq!(wolf, worst_before),
            }
            // The worst wolf never gets a hierarchy update.
            assert_eq!(report.updates.len(), config.nsa - 1);
            assert!(report.updates.iter().all(|u| u.wolf != worst_before));
        }
    }

    #[test]
    fn literal_rule_at_full_threshold_never_fires_and_state_is_stationary() {
        // At ci = mi the schedules collapse (a = 0, delta_w = 0) and the
        // literal decider e >= 1 never fires, so a population collapsed to
        // one point is a fixed point of the step.
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let config = OptimizerConfig {
            nsa: 8,
            max_iterations: 10,
            seed: 2,
            elimination_rule: EliminationRule::Literal,
            ..OptimizerConfig::default()
        };
        let mut state = OptimizerState::new(Metaheuristic::Gwa, &workload, &config, &params).unwrap();
        let point = PositionVector::new(vec![2.5], 10.0).unwrap();
        let fit = crate::decoder::fitness(&point, &workload, &params).unwrap();
        state.force_state(vec![point.clone(); 8], vec![fit; 8], 10);
        gwa_step(&mut state, &workload, &params).unwrap();
        for pos in state.population() {
            assert_eq!(pos, &point);
        }
    }

    #[test]
    fn rationale_rule_fires_with_probability_tau() {
        // ci = 0 gives tau = 0: the rationale rule can never fire on the
        // first iteration.
        let workload = contention_workload_for_opt(6, 3);
        let params = ObjectiveParams::default();
        let config = OptimizerConfig {
            nsa: 8,
            max_iterations: 4,
            seed: 13,
            ..OptimizerConfig::default()
        };
        let mut state = OptimizerState::new(Metaheuristic::Gwa, &workload, &config, &params).unwrap();
        let report = gwa_step(&mut state, &workload, &params).unwrap();
        assert!(matches!(report.elimination, EliminationReport::Kept { .. }));
    }
}
