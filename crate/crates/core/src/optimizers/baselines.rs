//! Order-based and greedy baseline allocators. Unlike the decoder, all
//! four baselines fall back to the other scenario when the preferred one
//! cannot satisfy a service.

use crate::decoder::{outcome_from, try_book_service, DecodeError, DecodeOutcome};
use crate::digital_object::DoRegistry;
use crate::model::{
    per_service_cost, per_service_objective, Allocation, ObjectiveParams, Scenario,
    ServiceAllocation, Workload,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The four non-metaheuristic allocation strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMethod {
    /// Random service order, rich scenario first.
    Ran,
    /// Prioritised first-come-first-serve, rich scenario first.
    HitIhc,
    /// Highest gainable profit first, higher-profit scenario first.
    GreP,
    /// Highest profit-to-satisfaction-cost ratio first, lower per-service
    /// objective scenario first.
    GreO,
}

/// Allocates every service with the given baseline and returns the decoded
/// outcome. Booking is atomic per service; the fallback scenario is tried
/// only after the preferred one is rolled back.
pub fn baseline_allocate(
    method: BaselineMethod,
    workload: &Workload,
    params: &ObjectiveParams,
    rng: &mut impl Rng,
) -> Result<DecodeOutcome, DecodeError> {
    let n = workload.service_count();
    let mut order: Vec<usize> = (0..n).collect();
    let mut preference = vec![[Scenario::Rich, Scenario::Scarce]; n];

    match method {
        BaselineMethod::Ran => {
            order.shuffle(rng);
        }
        BaselineMethod::HitIhc => {
            // Priority users first, each group in service-id (arrival) order.
            order.sort_by_key(|&i| (!workload.services[i].priority, i));
        }
        BaselineMethod::GreP => {
            let gain = |i: usize| {
                let p = &workload.services[i].profit;
                p.rich.max(p.scarce)
            };
            order.sort_by(|&a, &b| gain(b).total_cmp(&gain(a)).then(a.cmp(&b)));
            for i in 0..n {
                let p = &workload.services[i].profit;
                if p.scarce > p.rich {
                    preference[i] = [Scenario::Scarce, Scenario::Rich];
                }
            }
        }
        BaselineMethod::GreO => {
            let mut ratio = vec![0.0_f64; n];
            for i in 0..n {
                let service = &workload.services[i];
                let rich = per_service_objective(workload, service, Scenario::Rich, params);
                let scarce = per_service_objective(workload, service, Scenario::Scarce, params);
                let preferred = if rich <= scarce {
                    Scenario::Rich
                } else {
                    Scenario::Scarce
                };
                preference[i] = [preferred, preferred.other()];
                let cost = per_service_cost(workload, service, preferred);
                let gain = service.profit.rich.max(service.profit.scarce);
                ratio[i] = if cost > 0.0 { gain / cost } else { f64::INFINITY };
            }
            order.sort_by(|&a, &b| ratio[b].total_cmp(&ratio[a]).then(a.cmp(&b)));
        }
    }

    let mut registry = DoRegistry::from_workload(workload);
    let mut per_service = vec![ServiceAllocation::Unsatisfied; n];
    for &i in &order {
        for scenario in preference[i] {
            if let Some(copy_of_request) = try_book_service(&mut registry, workload, i, scenario)? {
                per_service[i] = ServiceAllocation::Satisfied {
                    scenario,
                    copy_of_request,
                };
                break;
            }
        }
    }
    outcome_from(workload, params, &registry, Allocation { per_service })
}
