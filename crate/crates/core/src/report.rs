use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// One failing index with the offending coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub value: String,
    /// Right-hand coefficient, for identity comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

/// Both sides of an identity at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowRow {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking one claim, identity or audit.
///
/// The status is derived: a report passes exactly when it holds no violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub n_checked: u64,
    /// Indices deliberately not checked (e.g. `p | n` exclusions).
    pub n_skipped: u64,
    pub violations: Vec<Violation>,
    /// Coefficients around the first identity mismatch.
    pub window: Vec<WindowRow>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            n_checked: 0,
            n_skipped: 0,
            violations: Vec::new(),
            window: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn status(&self) -> Status {
        if self.violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }
}
