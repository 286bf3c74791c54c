use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

use super::config::SuiteConfig;
use crate::numeric::Residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One executed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// Decimal with 20 significant digits, or `exact-zero`.
    pub residual: String,
    /// `exact` for exact-arithmetic checks, otherwise the absolute tolerance.
    pub tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Case {
    pub fn new(name: impl Into<String>) -> Self {
        Case {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Skipped,
            residual: "n/a".to_string(),
            tolerance: "n/a".to_string(),
            witness: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn outcome(mut self, passed: bool, residual: &Residual, tolerance: &str) -> Self {
        self.status = if passed { Status::Pass } else { Status::Fail };
        self.residual = residual.to_report_string();
        self.tolerance = tolerance.to_string();
        self
    }

    pub fn witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.params.insert("reason".to_string(), reason.into());
        self
    }

    pub fn failed(mut self, error: impl Display) -> Self {
        self.status = Status::Fail;
        self.witness = Some(error.to_string());
        self
    }

    /// Failing cases always carry a witness.
    pub(super) fn finish(mut self) -> Self {
        if self.status == Status::Fail && self.witness.is_none() {
            self.witness = Some(format!("residual {} exceeds tolerance {}", self.residual, self.tolerance));
        }
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub cases: Vec<Case>,
    pub summary: Summary,
    /// Only filled in when timing is requested, so reports stay byte-identical.
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: &str, config: SuiteConfig, cases: Vec<Case>) -> Self {
        let mut cases: Vec<Case> = cases.into_iter().map(Case::finish).collect();
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        let count = |s| cases.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        Report {
            suite: suite.to_string(),
            config,
            cases,
            summary,
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// `0` when every case passed or was skipped, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
