//! Request and response bodies of the service API.
//!
//! Endpoints (all JSON):
//! - `GET  /health` -> [`Health`]
//! - `POST /api/v1/generate` [`GenerateRequest`] -> `WorkloadDocument`
//! - `POST /api/v1/run` [`RunRequest`] -> `RunResult`
//! - `POST /api/v1/bench` [`BenchRequest`] -> `BenchResult`
//! - `POST /api/v1/decode` [`DecodeRequest`] -> `DecodeOutcome`
//!
//! Errors come back as a non-2xx status with an [`ApiErrorBody`].

use brad_core::harness::ExperimentConfig;
use brad_core::model::ObjectiveParams;
use brad_core::optimizers::Algorithm;
use brad_core::workload_gen::{GeneratorConfig, WorkloadDocument};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    #[serde(default)]
    pub config: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRequest {
    pub workload: WorkloadDocument,
    pub algo: Algorithm,
    #[serde(default)]
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRequest {
    pub workload: WorkloadDocument,
    #[serde(default)]
    pub config: ExperimentConfig,
}

fn default_ub() -> f64 {
    10.0
}

fn default_w() -> f64 {
    ObjectiveParams::DEFAULT_W
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeRequest {
    pub workload: WorkloadDocument,
    /// One component per service, each in `[0, ub]`.
    pub position: Vec<f64>,
    #[serde(default = "default_ub")]
    pub ub: f64,
    #[serde(default = "default_w")]
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub error: String,
}
