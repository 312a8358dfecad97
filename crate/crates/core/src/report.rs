//! Structured verification reports.
//!
//! A report is a list of named checks, each with the number of samples, the
//! largest residual seen and the threshold it was held to. Everything except
//! `wall_time_s` is a deterministic function of the command and the seed.

use serde::{Deserialize, Serialize};

use crate::VERSION;

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub samples: u64,
    pub max_residual: f64,
    pub threshold: f64,
    /// Trials that raised an error instead of producing a residual.
    #[serde(default)]
    pub failures: u64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// `pass` is `max_residual ≤ threshold` with no failed trials.
    pub fn new(name: impl Into<String>, samples: u64, max_residual: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            samples,
            max_residual,
            threshold,
            failures: 0,
            pass: max_residual <= threshold,
            note: None,
        }
    }

    pub fn with_failures(mut self, failures: u64) -> Self {
        self.failures = failures;
        self.pass = self.pass && failures == 0;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    /// The command line (or an equivalent description) that produced the run.
    pub command: Vec<String>,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    /// Name of the first failing check, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(command: Vec<String>, seed: u64, checks: Vec<CheckRecord>, wall_time_s: f64) -> Self {
        let first_failure = checks.iter().find(|c| !c.pass).map(|c| c.name.clone());
        Report {
            schema: SCHEMA,
            version: VERSION.to_string(),
            command,
            seed,
            pass: first_failure.is_none(),
            first_failure,
            checks,
            wall_time_s,
        }
    }

    /// The report with the wall time zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Report {
        Report {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}
