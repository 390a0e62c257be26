//! Bimetric-balanced multi-scenario resource allocation.
//!
//! Services request time windows on copies of heterogeneous resource kinds
//! spread over a resource-rich and a resource-scarce pool. An allocation is
//! scored by `cost + w * profit` with `w < 0`; the improved grey wolf
//! optimizer searches over a continuous per-service encoding that fixes
//! each service's scenario and execution order, decoded through per-copy
//! availability calendars with atomic per-service booking.
//!
//! Modules:
//! - [`model`]: domain types and the profit/cost/objective arithmetic
//! - [`digital_object`]: per-copy calendars, booking, and copy collaboration
//! - [`decoder`]: position vector to allocation decoding and fitness
//! - [`optimizers`]: the improved optimizer, vanilla GWO, and baselines
//! - [`workload_gen`]: seeded synthetic workloads and file persistence
//! - [`metrics`], [`report`], [`harness`]: the benchmark protocol and CSV
//!   output

pub mod decoder;
pub mod digital_object;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod optimizers;
pub mod report;
pub mod workload_gen;

mod rng;

#[cfg(test)]
pub(crate) mod testutil;

pub use decoder::{decode, fitness, DecodeOutcome, PositionVector};
pub use harness::{bench_all, run_experiment, BenchResult, ExperimentConfig, RunResult};
pub use model::{ObjectiveParams, Scenario, Workload};
pub use optimizers::{Algorithm, EliminationRule};
pub use workload_gen::{generate, GeneratorConfig, WorkloadDocument};
