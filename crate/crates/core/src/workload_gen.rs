//! Seeded synthetic workload generator and workload-file persistence.
//!
//! The file format is a versioned JSON document with stable key order (the
//! struct field order below). Money values are emitted at four-decimal
//! precision by the generator, so documents round-trip exactly.

use crate::model::{
    CopySpec, ModelError, PerScenario, ResourceKindSpec, ResourceRequest, Scenario,
    ScenarioResources, ServiceSpec, Time, Workload,
};
use crate::rng::substream;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const WORKLOAD_FORMAT: &str = "brad-workload";
pub const WORKLOAD_VERSION: u32 = 1;

/// Knobs of the synthetic generator. Ranges are inclusive `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n_services: usize,
    pub n_kinds: usize,
    pub copies_min: usize,
    pub copies_max: usize,
    pub horizon: Time,
    pub request_kinds_max: usize,
    pub duration_min: Time,
    pub duration_max: Time,
    pub rich_cost_range: (f64, f64),
    pub scarce_cost_multiplier_range: (f64, f64),
    pub profit_range: (f64, f64),
    pub scarce_profit_multiplier_range: (f64, f64),
    pub priority_fraction: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_services: 200,
            n_kinds: 10,
            copies_min: 3,
            copies_max: 50,
            horizon: 1000,
            request_kinds_max: 5,
            duration_min: 200,
            duration_max: 800,
            rich_cost_range: (0.03, 0.15),
            scarce_cost_multiplier_range: (1.2, 2.0),
            profit_range: (2.0, 30.0),
            scarce_profit_multiplier_range: (0.3, 1.2),
            priority_fraction: 0.3,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("n_services must be at least 1")]
    NoServices,
    #[error("n_kinds must be at least 1")]
    NoKinds,
    #[error("copies_min must be at least 1")]
    NoCopies,
    #[error("{name} range is empty: ({lo}, {hi})")]
    EmptyRange { name: &'static str, lo: f64, hi: f64 },
    #[error("duration_max {duration_max} exceeds horizon {horizon}")]
    DurationExceedsHorizon { duration_max: Time, horizon: Time },
    #[error("duration_min must be at least 1")]
    ZeroDuration,
    #[error("request_kinds_max {request_kinds_max} exceeds n_kinds {n_kinds}")]
    TooManyRequestKinds {
        request_kinds_max: usize,
        n_kinds: usize,
    },
    #[error("request_kinds_max must be at least 1")]
    NoRequestKinds,
    #[error("priority_fraction {0} must lie in [0, 1]")]
    InvalidPriorityFraction(f64),
    #[error("{name} range contains a negative or non-finite bound ({lo}, {hi})")]
    NegativeRange { name: &'static str, lo: f64, hi: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.n_services == 0 {
            return Err(GeneratorError::NoServices);
        }
        if self.n_kinds == 0 {
            return Err(GeneratorError::NoKinds);
        }
        if self.copies_min == 0 {
            return Err(GeneratorError::NoCopies);
        }
        if self.copies_max < self.copies_min {
            return Err(GeneratorError::EmptyRange {
                name: "copies",
                lo: self.copies_min as f64,
                hi: self.copies_max as f64,
            });
        }
        if self.duration_min == 0 {
            return Err(GeneratorError::ZeroDuration);
        }
        if self.duration_max < self.duration_min {
            return Err(GeneratorError::EmptyRange {
                name: "duration",
                lo: self.duration_min as f64,
                hi: self.duration_max as f64,
            });
        }
        if self.duration_max > self.horizon {
            return Err(GeneratorError::DurationExceedsHorizon {
                duration_max: self.duration_max,
                horizon: self.horizon,
            });
        }
        if self.request_kinds_max == 0 {
            return Err(GeneratorError::NoRequestKinds);
        }
        if self.request_kinds_max > self.n_kinds {
            return Err(GeneratorError::TooManyRequestKinds {
                request_kinds_max: self.request_kinds_max,
                n_kinds: self.n_kinds,
            });
        }
        for (name, (lo, hi)) in [
            ("rich_cost_range", self.rich_cost_range),
            (
                "scarce_cost_multiplier_range",
                self.scarce_cost_multiplier_range,
            ),
            ("profit_range", self.profit_range),
            (
                "scarce_profit_multiplier_range",
                self.scarce_profit_multiplier_range,
            ),
        ] {
            if !lo.is_finite() || !hi.is_finite() || lo < 0.0 {
                return Err(GeneratorError::NegativeRange { name, lo, hi });
            }
            if hi < lo {
                return Err(GeneratorError::EmptyRange { name, lo, hi });
            }
        }
        if !(0.0..=1.0).contains(&self.priority_fraction) {
            return Err(GeneratorError::InvalidPriorityFraction(
                self.priority_fraction,
            ));
        }
        Ok(())
    }
}

fn round_money(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// Deterministically generates a workload from the config's seed.
///
/// Warns (without failing) when aggregate demand does not exceed 1.2x the
/// capacity of the larger scenario, since an undersubscribed instance makes
/// every allocator look alike.
pub fn generate(cfg: &GeneratorConfig) -> Result<Workload, GeneratorError> {
    cfg.validate()?;
    let mut rng = substream(cfg.seed, crate::rng::purpose::GENERATOR, 0, 0);

    let mut kinds = Vec::with_capacity(cfg.n_kinds);
    for kind_id in 0..cfg.n_kinds {
        let rich_rate = round_money(rng.gen_range(cfg.rich_cost_range.0..=cfg.rich_cost_range.1));
        let multiplier = rng.gen_range(
            cfg.scarce_cost_multiplier_range.0..=cfg.scarce_cost_multiplier_range.1,
        );
        let scarce_rate = round_money(rich_rate * multiplier);
        let mut per_scenario = Vec::with_capacity(2);
        for rate in [rich_rate, scarce_rate] {
            let copy_count = rng.gen_range(cfg.copies_min..=cfg.copies_max);
            let min_span = cfg.horizon.div_ceil(2);
            let copies = (0..copy_count)
                .map(|_| {
                    let span = rng.gen_range(min_span..=cfg.horizon);
                    let up = rng.gen_range(0..=cfg.horizon - span);
                    CopySpec {
                        up,
                        down: up + span,
                    }
                })
                .collect();
            per_scenario.push(ScenarioResources {
                cost_rate: rate,
                copies,
            });
        }
        let scarce = per_scenario.pop().expect("two scenarios generated");
        let rich = per_scenario.pop().expect("two scenarios generated");
        kinds.push(ResourceKindSpec {
            kind_id,
            per_scenario: PerScenario::new(rich, scarce),
        });
    }

    let mut services = Vec::with_capacity(cfg.n_services);
    let mut kind_pool: Vec<usize> = (0..cfg.n_kinds).collect();
    for service_id in 0..cfg.n_services {
        let request_count = rng.gen_range(1..=cfg.request_kinds_max);
        // Partial Fisher-Yates over the kind pool picks distinct kinds.
        for slot in 0..request_count {
            let pick = rng.gen_range(slot..kind_pool.len());
            kind_pool.swap(slot, pick);
        }
        let mut chosen: Vec<usize> = kind_pool[..request_count].to_vec();
        chosen.sort_unstable();
        let requests = chosen
            .into_iter()
            .map(|kind_id| {
                let duration = rng.gen_range(cfg.duration_min..=cfg.duration_max);
                let start = rng.gen_range(0..=cfg.horizon - duration);
                ResourceRequest {
                    kind_id,
                    start,
                    finish: start + duration,
                }
            })
            .collect();
        let rich_profit = round_money(rng.gen_range(cfg.profit_range.0..=cfg.profit_range.1));
        let multiplier = rng.gen_range(
            cfg.scarce_profit_multiplier_range.0..=cfg.scarce_profit_multiplier_range.1,
        );
        let scarce_profit = round_money(rich_profit * multiplier);
        let priority = rng.gen::<f64>() < cfg.priority_fraction;
        services.push(ServiceSpec {
            service_id,
            requests,
            profit: PerScenario::new(rich_profit, scarce_profit),
            priority,
        });
    }

    let workload = Workload::new(kinds, services, cfg.horizon)?;
    let demand = aggregate_demand(&workload);
    let capacity = Scenario::ALL
        .into_iter()
        .map(|s| scenario_capacity(&workload, s))
        .max()
        .unwrap_or(0);
    if (demand as f64) <= 1.2 * capacity as f64 {
        tracing::warn!(
            demand,
            capacity,
            "aggregate demand does not exceed 1.2x the larger scenario's capacity; \
             the instance may be too easy to differentiate allocators"
        );
    }
    Ok(workload)
}

/// Total requested resource-time across all services.
pub fn aggregate_demand(workload: &Workload) -> Time {
    workload
        .services
        .iter()
        .flat_map(|s| s.requests.iter())
        .map(crate::model::utilisation_length)
        .sum()
}

/// Total bookable copy-time of one scenario.
pub fn scenario_capacity(workload: &Workload, scenario: Scenario) -> Time {
    workload
        .kinds
        .iter()
        .flat_map(|k| k.per_scenario.get(scenario).copies.iter())
        .map(|c| c.down - c.up)
        .sum()
}

/// The self-describing on-disk form of a workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadDocument {
    pub format: String,
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<GeneratorConfig>,
    pub workload: Workload,
}

impl WorkloadDocument {
    pub fn new(workload: Workload, config: Option<GeneratorConfig>) -> Self {
        Self {
            format: WORKLOAD_FORMAT.to_string(),
            version: WORKLOAD_VERSION,
            config,
            workload,
        }
    }

    /// Checks the version tag and the workload invariants.
    pub fn validate(&self) -> Result<(), LoadError> {
        if self.format != WORKLOAD_FORMAT {
            return Err(LoadError::Format {
                found: self.format.clone(),
            });
        }
        if self.version != WORKLOAD_VERSION {
            return Err(LoadError::Version {
                found: self.version,
            });
        }
        self.workload.validate()?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unexpected format tag `{found}` (expected `{WORKLOAD_FORMAT}`)")]
    Format { found: String },
    #[error("unsupported version {found} (expected {WORKLOAD_VERSION})")]
    Version { found: u32 },
    #[error("invalid workload: {0}")]
    Invalid(#[from] ModelError),
}

/// Canonical text serialization: pretty JSON in struct field order with a
/// trailing newline. Identical documents always serialize to identical
/// bytes.
pub fn persist(doc: &WorkloadDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("workload documents are serializable");
    text.push('\n');
    text
}

/// Parses and validates a workload document.
pub fn load(text: &str) -> Result<WorkloadDocument, LoadError> {
    let doc: WorkloadDocument = serde_json::from_str(text)?;
    doc.validate()?;
    Ok(doc)
}
