//! Domain types for scenarios, resources, services, and allocations, plus
//! the profit/cost/objective arithmetic of the bimetric-balanced model.
//!
//! Time is a nonnegative integer count of abstract time units; money and
//! rates are `f64`. All types are immutable value data once constructed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Abstract time unit count.
pub type Time = u64;
/// Money amount or money-per-time rate.
pub type Money = f64;

/// One of the two resource pools with independent copies, availabilities
/// and cost rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Rich,
    Scarce,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::Rich, Scenario::Scarce];

    pub fn other(self) -> Scenario {
        match self {
            Scenario::Rich => Scenario::Scarce,
            Scenario::Scarce => Scenario::Rich,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Rich => "rich",
            Scenario::Scarce => "scarce",
        }
    }
}

/// One value per scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerScenario<T> {
    pub rich: T,
    pub scarce: T,
}

impl<T> PerScenario<T> {
    pub fn new(rich: T, scarce: T) -> Self {
        Self { rich, scarce }
    }

    pub fn get(&self, scenario: Scenario) -> &T {
        match scenario {
            Scenario::Rich => &self.rich,
            Scenario::Scarce => &self.scarce,
        }
    }
}

impl<T: Copy> PerScenario<T> {
    pub fn at(&self, scenario: Scenario) -> T {
        *self.get(scenario)
    }
}

/// Up/down window of one resource copy; the copy is bookable on `[up, down)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopySpec {
    pub up: Time,
    pub down: Time,
}

/// Copies and cost rate of one resource kind within one scenario.
/// All copies of the same kind in the same scenario share `cost_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResources {
    pub cost_rate: Money,
    pub copies: Vec<CopySpec>,
}

impl ScenarioResources {
    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }
}

/// One resource kind, available in both scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceKindSpec {
    pub kind_id: usize,
    pub per_scenario: PerScenario<ScenarioResources>,
}

/// One time-constrained resource request of a service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceRequest {
    pub kind_id: usize,
    pub start: Time,
    pub finish: Time,
}

/// A service with its resource requests, per-scenario profits, and priority
/// flag (priority users are served first by the first-come-first-serve
/// baseline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceSpec {
    pub service_id: usize,
    pub requests: Vec<ResourceRequest>,
    pub profit: PerScenario<Money>,
    pub priority: bool,
}

/// A complete problem instance: `M` resource kinds, `N` services, and the
/// time horizon that bounds every window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    pub kinds: Vec<ResourceKindSpec>,
    pub services: Vec<ServiceSpec>,
    pub horizon: Time,
}

/// Per-service allocation outcome. A satisfied service draws all of its
/// resources from exactly one scenario; `copy_of_request[i]` is the copy
/// index chosen for `requests[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ServiceAllocation {
    Unsatisfied,
    Satisfied {
        scenario: Scenario,
        copy_of_request: Vec<usize>,
    },
}

impl ServiceAllocation {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ServiceAllocation::Satisfied { .. })
    }
}

/// Allocation outcomes for every service, aligned with `Workload::services`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub per_service: Vec<ServiceAllocation>,
}

impl Allocation {
    /// All-unsatisfied allocation for `n` services.
    pub fn empty(n: usize) -> Self {
        Self {
            per_service: vec![ServiceAllocation::Unsatisfied; n],
        }
    }

    pub fn satisfied_count(&self) -> usize {
        self.per_service.iter().filter(|a| a.is_satisfied()).count()
    }
}

/// Parameters of the bimetric objective `cost + w * profit`. The balancing
/// factor `w` must be negative so that profit reduces the minimized value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveParams {
    pub w: Money,
}

impl ObjectiveParams {
    pub const DEFAULT_W: Money = -5.0;

    pub fn new(w: Money) -> Result<Self, ModelError> {
        if !w.is_finite() || w >= 0.0 {
            return Err(ModelError::NonNegativeBalancingFactor { w });
        }
        Ok(Self { w })
    }
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        Self { w: Self::DEFAULT_W }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("kinds[{index}].kind_id is {kind_id}, expected {index} (kinds must be listed in id order)")]
    KindIdMismatch { index: usize, kind_id: usize },
    #[error("kinds[{kind_id}].{scenario}: copies must be nonempty")]
    NoCopies { kind_id: usize, scenario: &'static str },
    #[error("kinds[{kind_id}].{scenario}.copies[{copy}]: up {up} must be < down {down}")]
    CopyWindowEmpty {
        kind_id: usize,
        scenario: &'static str,
        copy: usize,
        up: Time,
        down: Time,
    },
    #[error("kinds[{kind_id}].{scenario}.copies[{copy}]: window [{up}, {down}) exceeds horizon {horizon}")]
    CopyOutsideHorizon {
        kind_id: usize,
        scenario: &'static str,
        copy: usize,
        up: Time,
        down: Time,
        horizon: Time,
    },
    #[error("kinds[{kind_id}].{scenario}.cost_rate must be finite and nonnegative, got {rate}")]
    InvalidCostRate {
        kind_id: usize,
        scenario: &'static str,
        rate: Money,
    },
    #[error("services[{index}].service_id is {service_id}, expected {index} (services must be listed in id order)")]
    ServiceIdMismatch { index: usize, service_id: usize },
    #[error("services[{service_id}].requests must be nonempty")]
    NoRequests { service_id: usize },
    #[error("services[{service_id}].requests[{request}]: start {start} must be < finish {finish}")]
    RequestWindowEmpty {
        service_id: usize,
        request: usize,
        start: Time,
        finish: Time,
    },
    #[error("services[{service_id}].requests[{request}]: window [{start}, {finish}) exceeds horizon {horizon}")]
    RequestOutsideHorizon {
        service_id: usize,
        request: usize,
        start: Time,
        finish: Time,
        horizon: Time,
    },
    #[error("services[{service_id}].requests[{request}]: unknown kind_id {kind_id} (have {kinds} kinds)")]
    UnknownKind {
        service_id: usize,
        request: usize,
        kind_id: usize,
        kinds: usize,
    },
    #[error("services[{service_id}]: duplicate request kind_id {kind_id}")]
    DuplicateRequestKind { service_id: usize, kind_id: usize },
    #[error("services[{service_id}].profit.{scenario} must be finite and nonnegative, got {profit}")]
    InvalidProfit {
        service_id: usize,
        scenario: &'static str,
        profit: Money,
    },
    #[error("balancing factor w must be negative, got {w}")]
    NonNegativeBalancingFactor { w: Money },
    #[error("allocation covers {actual} services, workload has {expected}")]
    AllocationLengthMismatch { expected: usize, actual: usize },
    #[error("allocation for service {service_id} lists {actual} copies, service has {expected} requests")]
    AllocationRequestMismatch {
        service_id: usize,
        expected: usize,
        actual: usize,
    },
    #[error("allocation for service {service_id} request {request}: copy index {copy} out of range ({copies} copies)")]
    AllocationCopyOutOfRange {
        service_id: usize,
        request: usize,
        copy: usize,
        copies: usize,
    },
}

impl Workload {
    /// Builds a workload, rejecting any invariant violation.
    pub fn new(
        kinds: Vec<ResourceKindSpec>,
        services: Vec<ServiceSpec>,
        horizon: Time,
    ) -> Result<Self, ModelError> {
        let workload = Self {
            kinds,
            services,
            horizon,
        };
        workload.validate()?;
        Ok(workload)
    }

    pub fn kind_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn service_count(&self) -> usize {
        self.services.len()
    }

    /// Checks every structural invariant, naming the offending field.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (index, kind) in self.kinds.iter().enumerate() {
            if kind.kind_id != index {
                return Err(ModelError::KindIdMismatch {
                    index,
                    kind_id: kind.kind_id,
                });
            }
            for scenario in Scenario::ALL {
                let res = kind.per_scenario.get(scenario);
                if !res.cost_rate.is_finite() || res.cost_rate < 0.0 {
                    return Err(ModelError::InvalidCostRate {
                        kind_id: index,
                        scenario: scenario.name(),
                        rate: res.cost_rate,
                    });
                }
                if res.copies.is_empty() {
                    return Err(ModelError::NoCopies {
                        kind_id: index,
                        scenario: scenario.name(),
                    });
                }
                for (copy, spec) in res.copies.iter().enumerate() {
                    if spec.up >= spec.down {
                        return Err(ModelError::CopyWindowEmpty {
                            kind_id: index,
                            scenario: scenario.name(),
                            copy,
                            up: spec.up,
                            down: spec.down,
                        });
                    }
                    if spec.down > self.horizon {
                        return Err(ModelError::CopyOutsideHorizon {
                            kind_id: index,
                            scenario: scenario.name(),
                            copy,
                            up: spec.up,
                            down: spec.down,
                            horizon: self.horizon,
                        });
                    }
                }
            }
        }
        for (index, service) in self.services.iter().enumerate() {
            if service.service_id != index {
                return Err(ModelError::ServiceIdMismatch {
                    index,
                    service_id: service.service_id,
                });
            }
            if service.requests.is_empty() {
                return Err(ModelError::NoRequests { service_id: index });
            }
            let mut seen = vec![false; self.kinds.len()];
            for (r, request) in service.requests.iter().enumerate() {
                if request.kind_id >= self.kinds.len() {
                    return Err(ModelError::UnknownKind {
                        service_id: index,
                        request: r,
                        kind_id: request.kind_id,
                        kinds: self.kinds.len(),
                    });
                }
                if seen[request.kind_id] {
                    return Err(ModelError::DuplicateRequestKind {
                        service_id: index,
                        kind_id: request.kind_id,
                    });
                }
                seen[request.kind_id] = true;
                if request.start >= request.finish {
                    return Err(ModelError::RequestWindowEmpty {
                        service_id: index,
                        request: r,
                        start: request.start,
                        finish: request.finish,
                    });
                }
                if request.finish > self.horizon {
                    return Err(ModelError::RequestOutsideHorizon {
                        service_id: index,
                        request: r,
                        start: request.start,
                        finish: request.finish,
                        horizon: self.horizon,
                    });
                }
            }
            for scenario in Scenario::ALL {
                let profit = service.profit.at(scenario);
                if !profit.is_finite() || profit < 0.0 {
                    return Err(ModelError::InvalidProfit {
                        service_id: index,
                        scenario: scenario.name(),
                        profit,
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks that an allocation is structurally aligned with this workload
    /// (lengths match, copy indices in range).
    pub fn validate_allocation(&self, alloc: &Allocation) -> Result<(), ModelError> {
        if alloc.per_service.len() != self.services.len() {
            return Err(ModelError::AllocationLengthMismatch {
                expected: self.services.len(),
                actual: alloc.per_service.len(),
            });
        }
        for (service, entry) in self.services.iter().zip(&alloc.per_service) {
            let ServiceAllocation::Satisfied {
                scenario,
                copy_of_request,
            } = entry
            else {
                continue;
            };
            if copy_of_request.len() != service.requests.len() {
                return Err(ModelError::AllocationRequestMismatch {
                    service_id: service.service_id,
                    expected: service.requests.len(),
                    actual: copy_of_request.len(),
                });
            }
            for (r, (&copy, request)) in copy_of_request.iter().zip(&service.requests).enumerate() {
                let copies = self.kinds[request.kind_id]
                    .per_scenario
                    .get(*scenario)
                    .copy_count();
                if copy >= copies {
                    return Err(ModelError::AllocationCopyOutOfRange {
                        service_id: service.service_id,
                        request: r,
                        copy,
                        copies,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Length of a request's utilisation period.
pub fn utilisation_length(request: &ResourceRequest) -> Time {
    request.finish - request.start
}

/// Total profit of an allocation: each satisfied service contributes its
/// profit in the scenario that satisfied it, unsatisfied services nothing.
pub fn allocation_profit(workload: &Workload, alloc: &Allocation) -> Result<Money, ModelError> {
    check_alignment(workload, alloc)?;
    let mut total = 0.0;
    for (service, entry) in workload.services.iter().zip(&alloc.per_service) {
        if let ServiceAllocation::Satisfied { scenario, .. } = entry {
            total += service.profit.at(*scenario);
        }
    }
    Ok(total)
}

/// Total cost of an allocation: each satisfied service pays, per request,
/// the utilisation length times the kind's cost rate in the satisfying
/// scenario. Unsatisfied services cost nothing.
pub fn allocation_cost(workload: &Workload, alloc: &Allocation) -> Result<Money, ModelError> {
    check_alignment(workload, alloc)?;
    let mut total = 0.0;
    for (service, entry) in workload.services.iter().zip(&alloc.per_service) {
        if let ServiceAllocation::Satisfied { scenario, .. } = entry {
            total += per_service_cost(workload, service, *scenario);
        }
    }
    Ok(total)
}

/// Contention-free cost of satisfying one service entirely in `scenario`:
/// the sum over its requests of utilisation length times the kind's rate.
pub fn per_service_cost(workload: &Workload, service: &ServiceSpec, scenario: Scenario) -> Money {
    service
        .requests
        .iter()
        .map(|req| {
            let rate = workload.kinds[req.kind_id].per_scenario.get(scenario).cost_rate;
            utilisation_length(req) as Money * rate
        })
        .sum()
}

/// Contention-free bimetric objective of satisfying one service in `scenario`.
pub fn per_service_objective(
    workload: &Workload,
    service: &ServiceSpec,
    scenario: Scenario,
    params: &ObjectiveParams,
) -> f64 {
    objective(
        per_service_cost(workload, service, scenario),
        service.profit.at(scenario),
        params,
    )
}

/// The bimetric-balanced objective `cost + w * profit`; lower is better.
pub fn objective(cost: Money, profit: Money, params: &ObjectiveParams) -> f64 {
    cost + params.w * profit
}

fn check_alignment(workload: &Workload, alloc: &Allocation) -> Result<(), ModelError> {
    if alloc.per_service.len() != workload.services.len() {
        return Err(ModelError::AllocationLengthMismatch {
            expected: workload.services.len(),
            actual: alloc.per_service.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{single_kind_workload, two_service_workload};

    #[test]
    fn utilisation_length_is_window_span() {
        let req = ResourceRequest {
            kind_id: 0,
            start: 4,
            finish: 10,
        };
        assert_eq!(utilisation_length(&req), 6);
        let unit = ResourceRequest {
            kind_id: 0,
            start: 0,
            finish: 1,
        };
        assert_eq!(utilisation_length(&unit), 1);
    }

    #[test]
    fn empty_request_window_rejected_at_construction() {
        let workload = single_kind_workload();
        let mut services = workload.services.clone();
        services[0].requests[0].finish = services[0].requests[0].start;
        let err = Workload::new(workload.kinds.clone(), services, workload.horizon).unwrap_err();
        assert!(matches!(err, ModelError::RequestWindowEmpty { .. }));
    }

    #[test]
    fn duplicate_request_kind_rejected() {
        let workload = single_kind_workload();
        let mut services = workload.services.clone();
        let dup = services[0].requests[0];
        services[0].requests.push(dup);
        let err = Workload::new(workload.kinds.clone(), services, workload.horizon).unwrap_err();
        assert_eq!(
            err,
            ModelError::DuplicateRequestKind {
                service_id: 0,
                kind_id: 0
            }
        );
    }

    #[test]
    fn all_unsatisfied_has_zero_profit_cost_objective() {
        let workload = two_service_workload();
        let alloc = Allocation::empty(workload.service_count());
        let params = ObjectiveParams::default();
        let profit = allocation_profit(&workload, &alloc).unwrap();
        let cost = allocation_cost(&workload, &alloc).unwrap();
        assert_eq!(profit, 0.0);
        assert_eq!(cost, 0.0);
        assert_eq!(objective(cost, profit, &params), 0.0);
    }

    #[test]
    fn profit_uses_the_satisfying_scenario() {
        let workload = single_kind_workload();
        let alloc = Allocation {
            per_service: vec![ServiceAllocation::Satisfied {
                scenario: Scenario::Rich,
                copy_of_request: vec![0],
            }],
        };
        assert_eq!(allocation_profit(&workload, &alloc).unwrap(), 10.0);
    }

    #[test]
    fn profit_sums_over_satisfied_services() {
        // Hand sum of the two indicator terms: 6 + 4 in the scarce scenario.
        let workload = two_service_workload();
        let alloc = Allocation {
            per_service: vec![
                ServiceAllocation::Satisfied {
                    scenario: Scenario::Scarce,
                    copy_of_request: vec![0],
                },
                ServiceAllocation::Satisfied {
                    scenario: Scenario::Scarce,
                    copy_of_request: vec![0],
                },
            ],
        };
        assert_eq!(allocation_profit(&workload, &alloc).unwrap(), 10.0);
    }

    #[test]
    fn cost_is_length_times_rate() {
        // One request of length 10 at rich rate 0.5.
        let workload = single_kind_workload();
        let alloc = Allocation {
            per_service: vec![ServiceAllocation::Satisfied {
                scenario: Scenario::Rich,
                copy_of_request: vec![0],
            }],
        };
        assert_eq!(allocation_cost(&workload, &alloc).unwrap(), 5.0);
    }

    #[test]
    fn cost_sums_request_terms() {
        // Hand sum: 10 * 0.2 + 20 * 0.1 = 4.0 in the scarce scenario.
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
                        cost_rate: 0.4,
                        copies: vec![CopySpec { up: 0, down: 100 }],
                    },
                    ScenarioResources {
                        cost_rate: 0.1,
                        copies: vec![CopySpec { up: 0, down: 100 }],
                    },
                ),
            },
        ];
        let services = vec![ServiceSpec {
            service_id: 0,
            requests: vec![
                ResourceRequest {
                    kind_id: 0,
                    start: 0,
                    finish: 10,
                },
                ResourceRequest {
                    kind_id: 1,
                    start: 10,
                    finish: 30,
                },
            ],
            profit: PerScenario::new(1.0, 1.0),
            priority: false,
        }];
        let workload = Workload::new(kinds, services, 100).unwrap();
        let alloc = Allocation {
            per_service: vec![ServiceAllocation::Satisfied {
                scenario: Scenario::Scarce,
                copy_of_request: vec![0, 0],
            }],
        };
        let cost = allocation_cost(&workload, &alloc).unwrap();
        assert!((cost - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_allocation_is_a_structural_error() {
        let workload = two_service_workload();
        let alloc = Allocation::empty(1);
        assert!(matches!(
            allocation_profit(&workload, &alloc),
            Err(ModelError::AllocationLengthMismatch { .. })
        ));
        assert!(matches!(
            allocation_cost(&workload, &alloc),
            Err(ModelError::AllocationLengthMismatch { .. })
        ));
    }

    #[test]
    fn objective_reproduces_reference_triples() {
        let params = ObjectiveParams::default();
        assert!((objective(1570.6, 459.9, &params) - -729.0).abs() <= 0.5);
        assert!((objective(3416.6, 1148.9, &params) - -2328.0).abs() <= 0.5);
        assert!((objective(3433.5, 1290.14, &params) - -3017.2).abs() <= 0.5);
        assert_eq!(objective(0.0, 0.0, &params), 0.0);
    }

    #[test]
    fn adding_a_satisfied_service_never_decreases_profit_or_cost() {
        let workload = two_service_workload();
        let base = Allocation::empty(2);
        for scenario in Scenario::ALL {
            let mut grown = base.clone();
            grown.per_service[1] = ServiceAllocation::Satisfied {
                scenario,
                copy_of_request: vec![0],
            };
            assert!(
                allocation_profit(&workload, &grown).unwrap()
                    >= allocation_profit(&workload, &base).unwrap()
            );
            assert!(
                allocation_cost(&workload, &grown).unwrap()
                    >= allocation_cost(&workload, &base).unwrap()
            );
        }
    }

    #[test]
    fn balancing_factor_must_be_negative() {
        assert!(ObjectiveParams::new(-5.0).is_ok());
        assert!(ObjectiveParams::new(0.0).is_err());
        assert!(ObjectiveParams::new(2.0).is_err());
        assert!(ObjectiveParams::new(f64::NAN).is_err());
    }
}
