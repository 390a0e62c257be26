//! Shared unit-test fixtures.

use crate::model::{
    CopySpec, PerScenario, ResourceKindSpec, ResourceRequest, ScenarioResources, ServiceSpec,
    Workload,
};

fn kind(kind_id: usize, rich_rate: f64, scarce_rate: f64, copies: usize) -> ResourceKindSpec {
    let copy = CopySpec { up: 0, down: 100 };
    ResourceKindSpec {
        kind_id,
        per_scenario: PerScenario::new(
            ScenarioResources {
                cost_rate: rich_rate,
                copies: vec![copy; copies],
            },
            ScenarioResources {
                cost_rate: scarce_rate,
                copies: vec![copy; copies],
            },
        ),
    }
}

/// One kind (rich rate 0.5, scarce 0.2, one copy each on [0,100)) and one
/// service requesting [0,10) with profit rich 10 / scarce 6.
pub fn single_kind_workload() -> Workload {
    let services = vec![ServiceSpec {
        service_id: 0,
        requests: vec![ResourceRequest {
            kind_id: 0,
            start: 0,
            finish: 10,
        }],
        profit: PerScenario::new(10.0, 6.0),
        priority: false,
    }];
    Workload::new(vec![kind(0, 0.5, 0.2, 1)], services, 100).unwrap()
}

/// Two services with non-overlapping windows on the single copy of one
/// kind; scarce profits are 6 and 4.
pub fn two_service_workload() -> Workload {
    let services = vec![
        ServiceSpec {
            service_id: 0,
            requests: vec![ResourceRequest {
                kind_id: 0,
                start: 0,
                finish: 10,
            }],
            profit: PerScenario::new(8.0, 6.0),
            priority: false,
        },
        ServiceSpec {
            service_id: 1,
            requests: vec![ResourceRequest {
                kind_id: 0,
                start: 20,
                finish: 30,
            }],
            profit: PerScenario::new(7.0, 4.0),
            priority: false,
        },
    ];
    Workload::new(vec![kind(0, 0.5, 0.2, 1)], services, 100).unwrap()
}

/// Two services contending for the same window on a one-copy-per-scenario
/// kind: only one can win each scenario.
pub fn contended_workload() -> Workload {
    let request = ResourceRequest {
        kind_id: 0,
        start: 0,
        finish: 10,
    };
    let services = vec![
        ServiceSpec {
            service_id: 0,
            requests: vec![request],
            profit: PerScenario::new(10.0, 6.0),
            priority: false,
        },
        ServiceSpec {
            service_id: 1,
            requests: vec![request],
            profit: PerScenario::new(9.0, 5.0),
            priority: false,
        },
    ];
    Workload::new(vec![kind(0, 0.5, 0.2, 1)], services, 100).unwrap()
}

/// A seeded workload with real copy contention, sized for optimizer tests.
pub fn contention_workload_for_opt(n_services: usize, seed: u64) -> Workload {
    crate::workload_gen::generate(&crate::workload_gen::GeneratorConfig {
        n_services,
        n_kinds: 2,
        copies_min: 1,
        copies_max: 2,
        request_kinds_max: 2,
        seed,
        ..Default::default()
    })
    .unwrap()
}
