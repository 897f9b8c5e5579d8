//! Report document written by `run` and printed by `verify`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Integration checks under `verify`.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: f64,
}

impl CheckRecord {
    /// A non-finite measurement always fails.
    pub fn judged(name: &str, measured: f64, tolerance: f64) -> Self {
        let status = if measured.is_finite() && measured <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.to_string(), status, measured: Some(measured), tolerance }
    }

    pub fn skipped(name: &str, tolerance: f64) -> Self {
        Self { name: name.to_string(), status: Status::Skipped, measured: None, tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub tool_version: String,
    pub seed: u64,
    /// Trajectory file name, relative to the report's directory.
    pub trajectory: Option<String>,
    pub checks: Vec<CheckRecord>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
