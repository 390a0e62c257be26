//! Vanilla grey wolf optimizer step: prey encircling guided by the top
//! three wolves, with a global encircling coefficient decaying from 2 to 0.

use super::{encircling_coefficient, EvalContext, OptimizerError, OptimizerState};
use crate::decoder::PositionVector;
use crate::model::{ObjectiveParams, Workload};
use crate::rng::{purpose, substream};
use rand::Rng;
use rayon::prelude::*;

/// Adjusts one leader position towards/away from the wolf at `x`:
/// `X' = X_l - A * |C * X_l - x|` componentwise, with fresh `A`, `C`
/// random vectors built from the encircling coefficient `a`.
pub(crate) fn adjust_leader(
    leader: &[f64],
    x: &[f64],
    a: f64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    leader
        .iter()
        .zip(x)
        .map(|(&l, &xd)| {
            let r1: f64 = rng.gen();
            let r2: f64 = rng.gen();
            let coeff_a = 2.0 * a * r1 - a;
            let coeff_c = 2.0 * r2;
            let dist = (coeff_c * l - xd).abs();
            l - coeff_a * dist
        })
        .collect()
}

/// One synchronous GWO iteration: every wolf moves to the clamped mean of
/// the three leader-adjusted positions and is re-evaluated.
pub fn gwo_step(
    state: &mut OptimizerState,
    workload: &Workload,
    params: &ObjectiveParams,
) -> Result<(), OptimizerError> {
    let ctx = EvalContext::new(workload, params);
    let a = encircling_coefficient(state.current_iteration(), state.max_iterations(), 0);
    let ub = state.population()[0].ub();
    let leader_positions: Vec<&PositionVector> = state.leaders()[..3]
        .iter()
        .map(|&idx| &state.population()[idx])
        .collect();

    let evaluated = (0..state.population().len())
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(state.seed(), purpose::WOLF, state.current_iteration(), i);
            let x = state.population()[i].values();
            let mut sum = vec![0.0; x.len()];
            for leader in &leader_positions {
                let adjusted = adjust_leader(leader.values(), x, a, &mut rng);
                for (acc, v) in sum.iter_mut().zip(adjusted) {
                    *acc += v;
                }
            }
            let values: Vec<f64> = sum.into_iter().map(|s| (s / 3.0).clamp(0.0, ub)).collect();
            let pos = PositionVector::new(values, ub).expect("clamped components are in range");
            let fit = ctx.fitness(&pos)?;
            Ok((pos, fit))
        })
        .collect::<Result<Vec<_>, OptimizerError>>()?;

    let (population, fitnesses) = evaluated.into_iter().unzip();
    state.apply_evaluations(population, fitnesses);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ObjectiveParams;
    use crate::optimizers::OptimizerConfig;
    use crate::testutil::contention_workload_for_opt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_encircling_coefficient_moves_exactly_to_the_leader() {
        // 1-D case X=8, X_l=4: D=|C*4-8| and X'=4-A*D. With a=0 every A
        // draw is 0, so X'=4 regardless of C.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let adjusted = adjust_leader(&[4.0], &[8.0], 0.0, &mut rng);
        assert_eq!(adjusted, vec![4.0]);
    }

    #[test]
    fn step_keeps_positions_in_bounds_and_advances_iteration() {
        let workload = contention_workload_for_opt(8, 23);
        let params = ObjectiveParams::default();
        let config = OptimizerConfig {
            nsa: 8,
            max_iterations: 5,
            seed: 7,
            ..OptimizerConfig::default()
        };
        let mut state = crate::optimizers::OptimizerState::new(crate::optimizers::Metaheuristic::Gwo, &workload, &config, &params).unwrap();
        for step in 0..config.max_iterations {
            gwo_step(&mut state, &workload, &params).unwrap();
            assert_eq!(state.current_iteration(), step + 1);
            for pos in state.population() {
                for &v in pos.values() {
                    assert!((0.0..=config.ub).contains(&v));
                }
            }
        }
    }
}
