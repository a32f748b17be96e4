//! Run manifest and the pass/fail records it carries.
//!
//! Every check stores its observed value next to the expectation, so
//! `verify` can re-derive the verdict from the stored data alone. Wall-clock
//! time lives in `timing.json` so that the manifest itself is reproducible.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expectation {
    AtMost { limit: f64 },
    AtLeast { limit: f64 },
    Within { lo: f64, hi: f64 },
    /// `|observed - target| ≤ tolerance`.
    Near { target: f64, tolerance: f64 },
    Equals { value: String },
    IsTrue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observed {
    Number(Option<f64>),
    Text(String),
    Flag(bool),
}

impl Expectation {
    pub fn holds(&self, observed: &Observed) -> bool {
        match (self, observed) {
            (Expectation::AtMost { limit }, Observed::Number(Some(v))) => v <= limit,
            (Expectation::AtLeast { limit }, Observed::Number(Some(v))) => v >= limit,
            (Expectation::Within { lo, hi }, Observed::Number(Some(v))) => lo <= v && v <= hi,
            (Expectation::Near { target, tolerance }, Observed::Number(Some(v))) => (v - target).abs() <= *tolerance,
            (Expectation::Equals { value }, Observed::Text(t)) => value == t,
            (Expectation::IsTrue, Observed::Flag(b)) => *b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: Observed,
    pub expected: Expectation,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, observed: Observed, expected: Expectation) -> Self {
        let passed = expected.holds(&observed);
        Check {
            name: name.into(),
            observed,
            expected,
            passed,
        }
    }

    /// Serialised JSON has no NaN, so non-finite values are stored as `null`
    /// and fail every numeric expectation.
    fn number(v: f64) -> Observed {
        Observed::Number(v.is_finite().then_some(v))
    }

    pub fn at_most(name: impl Into<String>, v: f64, limit: f64) -> Self {
        Self::new(name, Self::number(v), Expectation::AtMost { limit })
    }

    pub fn at_least(name: impl Into<String>, v: f64, limit: f64) -> Self {
        Self::new(name, Self::number(v), Expectation::AtLeast { limit })
    }

    pub fn within(name: impl Into<String>, v: f64, lo: f64, hi: f64) -> Self {
        Self::new(name, Self::number(v), Expectation::Within { lo, hi })
    }

    pub fn near(name: impl Into<String>, v: f64, target: f64, tolerance: f64) -> Self {
        Self::new(name, Self::number(v), Expectation::Near { target, tolerance })
    }

    pub fn equals(name: impl Into<String>, v: &str, value: &str) -> Self {
        Self::new(name, Observed::Text(v.into()), Expectation::Equals { value: value.into() })
    }

    pub fn is_true(name: impl Into<String>, v: bool) -> Self {
        Self::new(name, Observed::Flag(v), Expectation::IsTrue)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Pass,
    CheckFailure,
    Schema,
    RuntimeGuard,
    Io,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Pass => 0,
            RunStatus::Io => 1,
            RunStatus::CheckFailure => 2,
            RunStatus::Schema => 3,
            RunStatus::RuntimeGuard => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Abort {
    pub last_valid_time: f64,
    pub guard: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub artifact_version: String,
    pub scenario: Option<String>,
    /// Parsed config, or the raw text when it did not parse.
    pub config: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub files: Vec<String>,
    pub status: RunStatus,
    pub abort: Option<Abort>,
    pub error: Option<String>,
}

impl RunManifest {
    pub fn new(config: serde_json::Value) -> Self {
        RunManifest {
            artifact: env!("CARGO_PKG_NAME").into(),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            scenario: config.get("scenario").and_then(|s| s.as_str()).map(str::to_string),
            config,
            tolerances: BTreeMap::new(),
            checks: Vec::new(),
            files: Vec::new(),
            status: RunStatus::Pass,
            abort: None,
            error: None,
        }
    }

    /// Status implied by the checks alone.
    pub fn check_status(&self) -> RunStatus {
        if self.checks.iter().all(|c| c.passed) {
            RunStatus::Pass
        } else {
            RunStatus::CheckFailure
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations() {
        assert!(Check::at_most("x", 1.0, 1.0).passed);
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed);
        assert!(Check::near("x", -2.45, -2.5, 0.1).passed);
        assert!(!Check::within("x", 2.3, 1.8, 2.2).passed);
        assert!(Check::equals("v", "saturating", "saturating").passed);
        assert!(!Check::is_true("b", false).passed);
    }

    #[test]
    fn checks_survive_json() {
        let c = Check::at_most("residual", f64::INFINITY, 1e-4);
        let text = serde_json::to_string(&c).unwrap();
        let back: Check = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(!back.expected.holds(&back.observed));
    }
}
