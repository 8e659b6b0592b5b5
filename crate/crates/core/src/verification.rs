//! Named inequality checks and the reports that collect them.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Equality,
    Degenerate,
    HypothesisNotMet,
    Info,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Equality => "equality",
            Status::Degenerate => "degenerate",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::Info => "info",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pass" => Status::Pass,
            "fail" => Status::Fail,
            "equality" => Status::Equality,
            "degenerate" => Status::Degenerate,
            "hypothesis-not-met" => Status::HypothesisNotMet,
            "info" => Status::Info,
            _ => return None,
        })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked relation `lhs ≤ rhs` (or `lhs = rhs`); `margin = rhs - lhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn with_status(name: &str, params: String, lhs: f64, rhs: f64, tolerance: f64, status: Status) -> Self {
        Self { name: name.to_string(), params, lhs, rhs, margin: rhs - lhs, tolerance, status }
    }

    /// `lhs ≤ rhs` within `tolerance`; near-zero margins are reported as equality.
    pub fn at_most(name: &str, params: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        let status = if margin.abs() <= tolerance {
            Status::Equality
        } else if margin >= -tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self::with_status(name, params, lhs, rhs, tolerance, status)
    }

    /// `lhs = rhs` within `tolerance`.
    pub fn equal(name: &str, params: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let status = if (rhs - lhs).abs() <= tolerance { Status::Equality } else { Status::Fail };
        Self::with_status(name, params, lhs, rhs, tolerance, status)
    }

    /// A boolean condition recorded with both sides for reference.
    pub fn holds(name: &str, params: String, lhs: f64, rhs: f64, ok: bool) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self::with_status(name, params, lhs, rhs, 0.0, status)
    }

    pub fn info(name: &str, params: String, lhs: f64, rhs: f64) -> Self {
        Self::with_status(name, params, lhs, rhs, 0.0, Status::Info)
    }

    pub fn degenerate(name: &str, params: String, lhs: f64, rhs: f64) -> Self {
        Self::with_status(name, params, lhs, rhs, 0.0, Status::Degenerate)
    }

    pub fn hypothesis_not_met(name: &str, params: String, lhs: f64, rhs: f64) -> Self {
        Self::with_status(name, params, lhs, rhs, 0.0, Status::HypothesisNotMet)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub entries: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.entries.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.entries.iter().filter(|c| !c.passed())
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|c| c.status == status).count()
    }
}

/// Canonical `key=value` parameter list.
pub fn params(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}
