use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "mhr-report/1";

/// Keys holding wall-clock measurements; excluded from determinism.
pub const TIMING_KEYS: &[&str] = &["elapsed_ms"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// The measured quantity (residual, margin, eigenvalue, …).
    pub value: f64,
    /// What it was compared against.
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value <= threshold, value, threshold)
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value >= threshold, value, threshold)
    }

    pub fn greater(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value > threshold, value, threshold)
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Self::new(name, passed, if passed { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn new(name: &str, passed: bool, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            passed,
            value,
            threshold,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn error(name: &str, err: &Error) -> Self {
        Self::new(name, false, f64::NAN, f64::NAN).with_detail(err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub instance: Value,
    pub checks: Vec<CheckRecord>,
    /// Eigenvalues of the primitive Gram, ascending.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub spectrum: Vec<f64>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl TrialRecord {
    pub fn new(index: usize, seed: u64, instance: Value) -> Self {
        Self {
            index,
            seed,
            instance,
            checks: Vec::new(),
            spectrum: Vec::new(),
            passed: true,
            elapsed_ms: 0.0,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failure counts per check name.
    pub failures: BTreeMap<String, usize>,
    /// Smallest recorded value per margin-type check.
    pub worst: BTreeMap<String, f64>,
}

impl Summary {
    pub fn from_trials(trials: &[TrialRecord], margin_checks: &[&str]) -> Self {
        let mut failures = BTreeMap::new();
        let mut worst: BTreeMap<String, f64> = BTreeMap::new();
        for t in trials {
            for c in &t.checks {
                if !c.passed {
                    *failures.entry(c.name.clone()).or_insert(0) += 1;
                }
                if margin_checks.contains(&c.name.as_str()) && c.value.is_finite() {
                    let e = worst.entry(c.name.clone()).or_insert(f64::INFINITY);
                    *e = e.min(c.value);
                }
            }
        }
        let passed = trials.iter().filter(|t| t.passed).count();
        Self {
            total: trials.len(),
            passed,
            failed: trials.len() - passed,
            failures,
            worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub config: RunConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
    /// Command-specific results that are not per-trial.
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub extra: Value,
    pub elapsed_ms: f64,
}

impl ReportDocument {
    pub fn new(
        command: &str,
        config: &RunConfig,
        trials: Vec<TrialRecord>,
        margins: &[&str],
    ) -> Self {
        let summary = Summary::from_trials(&trials, margins);
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            config: config.clone(),
            trials,
            summary,
            extra: Value::Null,
            elapsed_ms: 0.0,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// One row per Gram eigenvalue: `index,seed,n,p,q,k,eigenvalue`.
    pub fn spectra_csv(&self) -> String {
        let mut out = String::from("index,seed,n,p,q,k,eigenvalue\n");
        for t in &self.trials {
            let field = |k: &str| t.instance.get(k).map(|v| v.to_string()).unwrap_or_default();
            for (k, e) in t.spectrum.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{:e}",
                    t.index,
                    t.seed,
                    field("n"),
                    field("p"),
                    field("q"),
                    k,
                    e
                );
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => Ok(self.spectra_csv()),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        std::fs::write(path, self.render(format)?)
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))
    }
}

/// Removes every timing key, recursively.
pub fn strip_timing(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for k in TIMING_KEYS {
                map.remove(*k);
            }
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn summary_counts() {
        let mut a = TrialRecord::new(0, 1, json!({"n": 2}));
        a.push(CheckRecord::at_least("margin", 0.5, 0.0));
        let mut b = TrialRecord::new(1, 2, json!({"n": 2}));
        b.push(CheckRecord::at_least("margin", -0.5, 0.0));
        let s = Summary::from_trials(&[a, b], &["margin"]);
        assert_eq!((s.total, s.passed, s.failed), (2, 1, 1));
        assert_eq!(s.failures["margin"], 1);
        assert_eq!(s.worst["margin"], -0.5);
    }

    #[test]
    fn timing_is_stripped() {
        let mut v = json!({"elapsed_ms": 3.0, "trials": [{"elapsed_ms": 1.0, "x": 1}]});
        strip_timing(&mut v);
        assert_eq!(v, json!({"trials": [{"x": 1}]}));
    }
}
