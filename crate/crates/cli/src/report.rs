//! Report schema: one record per executed check, plus an environment block.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    /// Stable check id, unique within a report.
    pub id: String,
    /// The structural claim the check verifies.
    pub claim: String,
    pub status: Status,
    /// Maximal numerical deviation observed (0 for exact integer checks).
    pub max_deviation: f64,
    pub runtime_ms: u128,
    /// Human-readable context (instance names, counts, witnesses).
    pub detail: String,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub environment: Environment,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }
}

/// Helper that times a check body and wraps its (deviation, detail, ok)
/// result.
pub fn timed_check(
    id: &str,
    claim: &str,
    body: impl FnOnce() -> (f64, String, Status),
) -> CheckOutcome {
    let start = std::time::Instant::now();
    let (max_deviation, detail, status) = body();
    CheckOutcome {
        id: id.to_string(),
        claim: claim.to_string(),
        status,
        max_deviation,
        runtime_ms: start.elapsed().as_millis(),
        detail,
    }
}
