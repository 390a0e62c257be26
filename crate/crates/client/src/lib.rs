//! Wire types and HTTP client for the brad allocation service.

pub mod protocol;

use protocol::{ApiErrorBody, BenchRequest, DecodeRequest, GenerateRequest, Health, RunRequest};

use brad_core::decoder::DecodeOutcome;
use brad_core::harness::{BenchResult, RunResult};
use brad_core::workload_gen::{GeneratorConfig, WorkloadDocument};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("service error ({status}): {message}")]
    Api { status: u16, message: String },
}

/// Thin async client for the service endpoints.
#[derive(Debug, Clone)]
pub struct BradClient {
    http: reqwest::Client,
    base_url: String,
}

impl BradClient {
    /// `base_url` like `http://127.0.0.1:8787`.
    pub fn new(base_url: impl Into<String>) -> Self {
        let mut base_url = base_url.into();
        while base_url.ends_with('/') {
            base_url.pop();
        }
        Self {
            http: reqwest::Client::new(),
            base_url,
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    async fn decode_response<Resp: DeserializeOwned>(
        response: reqwest::Response,
    ) -> Result<Resp, ClientError> {
        let status = response.status();
        if status.is_success() {
            return Ok(response.json().await?);
        }
        let message = match response.json::<ApiErrorBody>().await {
            Ok(body) => body.error,
            Err(_) => status.to_string(),
        };
        Err(ClientError::Api {
            status: status.as_u16(),
            message,
        })
    }

    async fn post<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        body: &Req,
    ) -> Result<Resp, ClientError> {
        let response = self
            .http
            .post(format!("{}{path}", self.base_url))
            .json(body)
            .send()
            .await?;
        Self::decode_response(response).await
    }

    pub async fn health(&self) -> Result<Health, ClientError> {
        let response = self
            .http
            .get(format!("{}/health", self.base_url))
            .send()
            .await?;
        Self::decode_response(response).await
    }

    /// Generates a seeded workload server-side and returns its document.
    pub async fn generate(&self, config: &GeneratorConfig) -> Result<WorkloadDocument, ClientError> {
        self.post(
            "/api/v1/generate",
            &GenerateRequest {
                config: config.clone(),
            },
        )
        .await
    }

    /// Runs one algorithm with the repeat protocol.
    pub async fn run(&self, request: &RunRequest) -> Result<RunResult, ClientError> {
        self.post("/api/v1/run", request).await
    }

    /// Runs every algorithm on one workload.
    pub async fn bench(&self, request: &BenchRequest) -> Result<BenchResult, ClientError> {
        self.post("/api/v1/bench", request).await
    }

    /// Decodes one position vector against a workload.
    pub async fn decode(&self, request: &DecodeRequest) -> Result<DecodeOutcome, ClientError> {
        self.post("/api/v1/decode", request).await
    }
}
