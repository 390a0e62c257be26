//! Maps a continuous position vector to a concrete allocation (scenario
//! choice, execution order, atomic booking) and computes its fitness.

use crate::digital_object::{BookingError, CollaborateOutcome, DoRegistry, Interval};
use crate::model::{
    allocation_cost, allocation_profit, objective, Allocation, ModelError, Money, ObjectiveParams,
    Scenario, ServiceAllocation, Workload,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The grey-wolf encoding: one component per service, each in `[0, ub]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionVector {
    values: Vec<f64>,
    ub: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("position has {position} components, workload has {services} services")]
    LengthMismatch { services: usize, position: usize },
    #[error("upper bound must be finite and positive, got {ub}")]
    InvalidUpperBound { ub: f64 },
    #[error("component {index} is {value}, outside [0, {ub}]")]
    ComponentOutOfRange { index: usize, value: f64, ub: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Booking(#[from] BookingError),
}

impl PositionVector {
    pub fn new(values: Vec<f64>, ub: f64) -> Result<Self, DecodeError> {
        if !ub.is_finite() || ub <= 0.0 {
            return Err(DecodeError::InvalidUpperBound { ub });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 || value > ub {
                return Err(DecodeError::ComponentOutOfRange { index, value, ub });
            }
        }
        Ok(Self { values, ub })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ub(&self) -> f64 {
        self.ub
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Everything the evaluation of one position yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub allocation: Allocation,
    pub profit: Money,
    pub cost: Money,
    pub objective_value: f64,
    pub satisfied_count: usize,
    /// Booked time over initial span, across every copy of both scenarios.
    pub utilisation: f64,
}

/// Scenario designated by one component value: the lower half of `[0, ub]`
/// maps to the resource-rich scenario, the upper half to the scarce one.
/// Panics if `value` is outside `[0, ub]`.
pub fn scenario_of(value: f64, ub: f64) -> Scenario {
    assert!(
        value >= 0.0 && value <= ub,
        "component {value} outside [0, {ub}]"
    );
    if value < ub / 2.0 {
        Scenario::Rich
    } else {
        Scenario::Scarce
    }
}

/// Service execution order: indices sorted by component value ascending,
/// ties broken by lower service index.
pub fn execution_order(pos: &PositionVector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pos.values.len()).collect();
    order.sort_by(|&a, &b| {
        pos.values[a]
            .total_cmp(&pos.values[b])
            .then(a.cmp(&b))
    });
    order
}

/// Attempts to book every request of service `n` in `scenario`. Either all
/// requests are booked and the chosen copy indices are returned, or nothing
/// is (partial bookings are rolled back).
pub(crate) fn try_book_service(
    registry: &mut DoRegistry,
    workload: &Workload,
    n: usize,
    scenario: Scenario,
) -> Result<Option<Vec<usize>>, BookingError> {
    let service = &workload.services[n];
    let mut copies = Vec::with_capacity(service.requests.len());
    for (r, request) in service.requests.iter().enumerate() {
        let interval = Interval::new(request.start, request.finish);
        match registry.collaborate_book(scenario, request.kind_id, interval)? {
            CollaborateOutcome::BookedAt { copy_index } => copies.push(copy_index),
            CollaborateOutcome::Refused => {
                for (booked_r, &copy_index) in copies.iter().enumerate().take(r) {
                    let booked = &service.requests[booked_r];
                    registry.cancel_booking(
                        scenario,
                        booked.kind_id,
                        copy_index,
                        Interval::new(booked.start, booked.finish),
                    )?;
                }
                return Ok(None);
            }
        }
    }
    Ok(Some(copies))
}

pub(crate) fn outcome_from(
    workload: &Workload,
    params: &ObjectiveParams,
    registry: &DoRegistry,
    allocation: Allocation,
) -> Result<DecodeOutcome, DecodeError> {
    let profit = allocation_profit(workload, &allocation)?;
    let cost = allocation_cost(workload, &allocation)?;
    let objective_value = objective(cost, profit, params);
    let satisfied_count = allocation.satisfied_count();
    let span = registry.total_span();
    let utilisation = if span == 0 {
        0.0
    } else {
        registry.total_booked() as f64 / span as f64
    };
    Ok(DecodeOutcome {
        allocation,
        profit,
        cost,
        objective_value,
        satisfied_count,
        utilisation,
    })
}

/// Decodes a position against a fresh registry built from the workload.
pub fn decode(
    pos: &PositionVector,
    workload: &Workload,
    params: &ObjectiveParams,
) -> Result<DecodeOutcome, DecodeError> {
    let mut registry = DoRegistry::from_workload(workload);
    decode_into(pos, workload, params, &mut registry)
}

/// Decodes a position against a caller-provided registry (which must be
/// fresh). Services are visited in execution order; each is booked in its
/// designated scenario atomically, with no fallback to the other scenario.
pub fn decode_into(
    pos: &PositionVector,
    workload: &Workload,
    params: &ObjectiveParams,
    registry: &mut DoRegistry,
) -> Result<DecodeOutcome, DecodeError> {
    if pos.len() != workload.services.len() {
        return Err(DecodeError::LengthMismatch {
            services: workload.services.len(),
            position: pos.len(),
        });
    }
    let mut per_service = vec![ServiceAllocation::Unsatisfied; workload.services.len()];
    for n in execution_order(pos) {
        let scenario = scenario_of(pos.values[n], pos.ub);
        if let Some(copy_of_request) = try_book_service(registry, workload, n, scenario)? {
            per_service[n] = ServiceAllocation::Satisfied {
                scenario,
                copy_of_request,
            };
        }
    }
    outcome_from(workload, params, registry, Allocation { per_service })
}

/// Fitness of a position: the bimetric objective of its decoded allocation.
/// Lower is better.
pub fn fitness(
    pos: &PositionVector,
    workload: &Workload,
    params: &ObjectiveParams,
) -> Result<f64, DecodeError> {
    Ok(decode(pos, workload, params)?.objective_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{contended_workload, single_kind_workload};

    #[test]
    fn scenario_split_is_at_half_ub() {
        assert_eq!(scenario_of(4.9, 10.0), Scenario::Rich);
        assert_eq!(scenario_of(5.0, 10.0), Scenario::Scarce);
        assert_eq!(scenario_of(0.0, 10.0), Scenario::Rich);
        assert_eq!(scenario_of(10.0, 10.0), Scenario::Scarce);
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn scenario_of_rejects_out_of_range_values() {
        scenario_of(10.5, 10.0);
    }

    #[test]
    fn execution_order_sorts_ascending_with_index_tiebreak() {
        let pos = PositionVector::new(vec![3.1, 0.5, 7.2], 10.0).unwrap();
        assert_eq!(execution_order(&pos), vec![1, 0, 2]);
        let tied = PositionVector::new(vec![2.0, 2.0], 10.0).unwrap();
        assert_eq!(execution_order(&tied), vec![0, 1]);
        let single = PositionVector::new(vec![9.9], 10.0).unwrap();
        assert_eq!(execution_order(&single), vec![0]);
    }

    #[test]
    fn position_components_must_lie_in_bounds() {
        assert!(PositionVector::new(vec![0.0, 10.0], 10.0).is_ok());
        assert!(matches!(
            PositionVector::new(vec![-0.1], 10.0),
            Err(DecodeError::ComponentOutOfRange { .. })
        ));
        assert!(matches!(
            PositionVector::new(vec![10.1], 10.0),
            Err(DecodeError::ComponentOutOfRange { .. })
        ));
        assert!(matches!(
            PositionVector::new(vec![f64::NAN], 10.0),
            Err(DecodeError::ComponentOutOfRange { .. })
        ));
    }

    #[test]
    fn decode_books_in_the_rich_scenario_for_low_components() {
        // Hand-traced: kind0 copy [0,100) in each scenario, request [0,10),
        // rich rate 0.5, profit rich 10; objective 5 - 5*10 = -45.
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![2.0], 10.0).unwrap();
        let outcome = decode(&pos, &workload, &params).unwrap();
        assert_eq!(
            outcome.allocation.per_service[0],
            ServiceAllocation::Satisfied {
                scenario: Scenario::Rich,
                copy_of_request: vec![0],
            }
        );
        assert_eq!(outcome.profit, 10.0);
        assert_eq!(outcome.cost, 5.0);
        assert_eq!(outcome.objective_value, -45.0);
        assert_eq!(outcome.satisfied_count, 1);
        assert!((outcome.utilisation - 10.0 / 200.0).abs() < 1e-12);
    }

    #[test]
    fn decode_books_in_the_scarce_scenario_for_high_components() {
        // Hand-traced: scarce rate 0.2, profit scarce 6; 2 - 5*6 = -28.
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![7.0], 10.0).unwrap();
        let outcome = decode(&pos, &workload, &params).unwrap();
        assert_eq!(outcome.profit, 6.0);
        assert_eq!(outcome.cost, 2.0);
        assert_eq!(outcome.objective_value, -28.0);
    }

    #[test]
    fn contention_resolves_by_execution_order_without_fallback() {
        // Both services need the only rich copy over overlapping windows;
        // the earlier-ordered one wins, the loser stays unsatisfied even
        // though the scarce copy is free.
        let workload = contended_workload();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![1.0, 2.0], 10.0).unwrap();
        let outcome = decode(&pos, &workload, &params).unwrap();
        assert!(outcome.allocation.per_service[0].is_satisfied());
        assert_eq!(
            outcome.allocation.per_service[1],
            ServiceAllocation::Unsatisfied
        );

        // Reversing the order flips the winner.
        let pos = PositionVector::new(vec![2.0, 1.0], 10.0).unwrap();
        let outcome = decode(&pos, &workload, &params).unwrap();
        assert_eq!(
            outcome.allocation.per_service[0],
            ServiceAllocation::Unsatisfied
        );
        assert!(outcome.allocation.per_service[1].is_satisfied());
    }

    #[test]
    fn fitness_matches_decode_objective_and_is_deterministic() {
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![2.0], 10.0).unwrap();
        assert_eq!(fitness(&pos, &workload, &params).unwrap(), -45.0);
        let a = decode(&pos, &workload, &params).unwrap();
        let b = decode(&pos, &workload, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn length_mismatch_is_a_structural_error() {
        let workload = single_kind_workload();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![1.0, 2.0], 10.0).unwrap();
        assert!(matches!(
            decode(&pos, &workload, &params),
            Err(DecodeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn unsatisfied_decode_has_zero_objective() {
        // Request window outside every copy's availability.
        let mut workload = single_kind_workload();
        workload.services[0].requests[0] = crate::model::ResourceRequest {
            kind_id: 0,
            start: 150,
            finish: 160,
        };
        workload.horizon = 200;
        workload.validate().unwrap();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![2.0], 10.0).unwrap();
        let outcome = decode(&pos, &workload, &params).unwrap();
        assert_eq!(outcome.satisfied_count, 0);
        assert_eq!(outcome.objective_value, 0.0);
        assert_eq!(outcome.utilisation, 0.0);
    }

    #[test]
    fn rollback_leaves_no_partial_bookings() {
        // Service 0 needs kinds 0 and 1; kind 1 is unavailable, so its
        // booking of kind 0 must be rolled back before service 1 runs.
        use crate::model::*;
        let kinds = vec![
            ResourceKindSpec {
                kind_id: 0,
                per_scenario: PerScenario::new(
                    ScenarioResources {
                        cost_rate: 0.5,
                        copies: vec![CopySpec { up: 0, down: 100 }],
                    },
                    ScenarioResources {
                        cost_rate: 0.2,
                        copies: vec![CopySpec { up: 0, down: 100 }],
                    },
                ),
            },
            ResourceKindSpec {
                kind_id: 1,
                per_scenario: PerScenario::new(
                    ScenarioResources {
                        cost_rate: 0.5,
                        copies: vec![CopySpec { up: 90, down: 100 }],
                    },
                    ScenarioResources {
                        cost_rate: 0.2,
                        copies: vec![CopySpec { up: 90, down: 100 }],
                    },
                ),
            },
        ];
        let window = |kind_id| ResourceRequest {
            kind_id,
            start: 0,
            finish: 10,
        };
        let services = vec![
            ServiceSpec {
                service_id: 0,
                requests: vec![window(0), window(1)],
                profit: PerScenario::new(10.0, 6.0),
                priority: false,
            },
            ServiceSpec {
                service_id: 1,
                requests: vec![window(0)],
                profit: PerScenario::new(10.0, 6.0),
                priority: false,
            },
        ];
        let workload = Workload::new(kinds, services, 100).unwrap();
        let params = ObjectiveParams::default();
        let pos = PositionVector::new(vec![1.0, 2.0], 10.0).unwrap();
        let mut registry = DoRegistry::from_workload(&workload);
        let outcome = decode_into(&pos, &workload, &params, &mut registry).unwrap();
        assert_eq!(
            outcome.allocation.per_service[0],
            ServiceAllocation::Unsatisfied
        );
        assert!(outcome.allocation.per_service[1].is_satisfied());
        // Conservation: only service 1's single request is booked.
        assert_eq!(registry.total_booked(), 10);
    }
}
