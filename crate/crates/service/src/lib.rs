//! HTTP/JSON service exposing workload generation, optimizer runs, the
//! benchmark protocol, and position decoding. All state travels in the
//! request body; handlers are pure compute behind `spawn_blocking`.

use axum::extract::DefaultBodyLimit;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use brad_client::protocol::{
    ApiErrorBody, BenchRequest, DecodeRequest, GenerateRequest, Health, RunRequest,
};
use brad_core::decoder::{decode, DecodeOutcome, PositionVector};
use brad_core::harness::{bench_all, run_experiment, BenchResult, RunResult};
use brad_core::model::ObjectiveParams;
use brad_core::workload_gen::{generate, WorkloadDocument};

/// Largest accepted request body; generated workload documents stay well
/// under this.
const BODY_LIMIT: usize = 64 * 1024 * 1024;

pub fn router() -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/api/v1/generate", post(generate_workload))
        .route("/api/v1/run", post(run_algorithm))
        .route("/api/v1/bench", post(bench_workload))
        .route("/api/v1/decode", post(decode_position))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
}

/// Serves the API on an already-bound listener until the task is dropped.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router()).await
}

struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(err: impl std::fmt::Display) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: err.to_string(),
        }
    }

    fn internal(err: impl std::fmt::Display) -> Self {
        Self {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: err.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ApiErrorBody {
                error: self.message,
            }),
        )
            .into_response()
    }
}

/// Runs CPU-bound work off the async executor.
async fn blocking<T, F>(work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(work)
        .await
        .map_err(ApiError::internal)?
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

async fn generate_workload(
    Json(request): Json<GenerateRequest>,
) -> Result<Json<WorkloadDocument>, ApiError> {
    let document = blocking(move || {
        let workload = generate(&request.config).map_err(ApiError::bad_request)?;
        Ok(WorkloadDocument::new(workload, Some(request.config)))
    })
    .await?;
    Ok(Json(document))
}

async fn run_algorithm(Json(request): Json<RunRequest>) -> Result<Json<RunResult>, ApiError> {
    let result = blocking(move || {
        request.workload.validate().map_err(ApiError::bad_request)?;
        run_experiment(&request.workload.workload, request.algo, &request.config)
            .map_err(ApiError::bad_request)
    })
    .await?;
    Ok(Json(result))
}

async fn bench_workload(Json(request): Json<BenchRequest>) -> Result<Json<BenchResult>, ApiError> {
    let result = blocking(move || {
        request.workload.validate().map_err(ApiError::bad_request)?;
        bench_all(&request.workload.workload, &request.config).map_err(ApiError::bad_request)
    })
    .await?;
    Ok(Json(result))
}

async fn decode_position(
    Json(request): Json<DecodeRequest>,
) -> Result<Json<DecodeOutcome>, ApiError> {
    let outcome = blocking(move || {
        request.workload.validate().map_err(ApiError::bad_request)?;
        let params = ObjectiveParams::new(request.w).map_err(ApiError::bad_request)?;
        let position =
            PositionVector::new(request.position, request.ub).map_err(ApiError::bad_request)?;
        decode(&position, &request.workload.workload, &params).map_err(ApiError::bad_request)
    })
    .await?;
    Ok(Json(outcome))
}
