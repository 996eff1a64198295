//! Structured pass/fail records produced by the verification suites and the
//! generic quantile checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::config::ToleranceConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the check failed on the grid, so no conclusion was drawn.
    Inconclusive,
    /// Recorded for exploration only; never affects the overall verdict.
    Info,
}

/// One check: what was measured, against what tolerance, and the worst
/// offending point if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    /// NaN when nothing could be measured; JSON has no NaN, so it is written
    /// as null.
    #[serde(deserialize_with = "nan_from_null")]
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
    pub pass: bool,
    pub witness: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckRecord {
    /// A record that passes iff `residual <= tolerance`. NaN residuals fail.
    pub fn bound(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self::with_status(name, residual, tolerance, status)
    }

    /// A record for a count of violations that must be zero.
    pub fn violations(name: impl Into<String>, count: usize) -> Self {
        Self::bound(name, count as f64, 0.0)
    }

    pub fn with_status(name: impl Into<String>, residual: f64, tolerance: f64, status: Status) -> Self {
        CheckRecord {
            name: name.into(),
            params: BTreeMap::new(),
            residual,
            tolerance,
            status,
            pass: matches!(status, Status::Pass | Status::Info),
            witness: BTreeMap::new(),
            note: None,
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self::with_status(name, value, 0.0, Status::Info)
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// NaN values mean there is no witness and are dropped.
    pub fn witness(mut self, key: &str, value: f64) -> Self {
        if !value.is_nan() {
            self.witness.insert(key.to_string(), value);
        }
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }

    pub fn is_informational(&self) -> bool {
        self.status == Status::Info
    }
}

fn nan_from_null<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub overall_pass: bool,
    pub tolerances: ToleranceConfig,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<CheckRecord>, tolerances: ToleranceConfig) -> Self {
        let overall_pass = checks.iter().all(|c| c.pass);
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            checks,
            overall_pass,
            tolerances,
        }
    }

    /// Concatenate several reports under a new suite name.
    pub fn merge(suite: impl Into<String>, parts: Vec<VerificationReport>, tolerances: ToleranceConfig) -> Self {
        let checks = parts.into_iter().flat_map(|r| r.checks).collect();
        Self::new(suite, checks, tolerances)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        // Only plain data inside, serialisation cannot fail.
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_semantics() {
        assert!(CheckRecord::bound("x", 1e-14, 1e-13).pass);
        assert!(!CheckRecord::bound("x", 1e-12, 1e-13).pass);
        assert!(!CheckRecord::bound("x", f64::NAN, 1e-13).pass);
        assert!(CheckRecord::violations("v", 0).pass);
        assert!(!CheckRecord::violations("v", 1).pass);
    }

    #[test]
    fn info_and_inconclusive() {
        let r = VerificationReport::new(
            "t",
            vec![CheckRecord::info("guess", -1.0)],
            ToleranceConfig::default(),
        );
        assert!(r.overall_pass);
        let r = VerificationReport::new(
            "t",
            vec![CheckRecord::with_status("h", 0.0, 0.0, Status::Inconclusive)],
            ToleranceConfig::default(),
        );
        assert!(!r.overall_pass);
    }

    #[test]
    fn json_round_trip() {
        let r = VerificationReport::new(
            "demo",
            vec![CheckRecord::bound("c", 0.5, 1.0).param("b", 2.0).witness("a", 3.0)],
            ToleranceConfig::default(),
        );
        let text = r.to_json();
        assert!(text.contains("\"schema\": 1"));
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn nan_survives_json() {
        let r = VerificationReport::new(
            "demo",
            vec![CheckRecord::with_status("h", f64::NAN, 0.0, Status::Inconclusive).witness("a", f64::NAN)],
            ToleranceConfig::default(),
        );
        assert!(r.checks[0].witness.is_empty());
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert!(back.checks[0].residual.is_nan());
    }
}
