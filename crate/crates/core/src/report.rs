//! Structured verification reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub what: String,
    pub witness: Value,
}

/// Outcome of one check, serialised as
/// `{check, radius, certified_pairs, violations, passed, details}`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub radius: Option<usize>,
    pub certified_pairs: u64,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub details: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, radius: Option<usize>) -> Self {
        Report {
            check: check.into(),
            radius,
            certified_pairs: 0,
            violations: Vec::new(),
            passed: true,
            details: Value::Object(Default::default()),
        }
    }

    /// Records a violation and marks the report failed.
    pub fn violation(&mut self, what: impl Into<String>, witness: Value) {
        self.passed = false;
        if self.violations.len() < 50 {
            self.violations.push(Violation {
                what: what.into(),
                witness,
            });
        }
    }

    /// Fails the report with `what` unless `ok`.
    pub fn require(&mut self, ok: bool, what: impl Into<String>, witness: Value) {
        if !ok {
            self.violation(what, witness);
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        if let Value::Object(m) = &mut self.details {
            m.insert(key.to_string(), serde_json::to_value(value).expect("serialisable detail"));
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }
}

/// Several reports under one suite name.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub reports: Vec<Report>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, reports: Vec<Report>) -> Self {
        SuiteReport {
            suite: suite.into(),
            passed: reports.iter().all(|r| r.passed),
            reports,
        }
    }
}
