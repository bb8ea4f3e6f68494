//! Report structure shared by every subcommand, with a stable
//! line-oriented human format and a self-describing JSON machine format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Error => "ERROR",
        }
    }
}

/// What the verdict rests on. Bounded-exhaustive checks name their domain;
/// randomized checks name trials and seed; single executions say so.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evidence {
    Exhaustive { domain: String, configurations: u64 },
    Randomized { trials: u64, seed: u64 },
    Execution,
}

impl Evidence {
    fn describe(&self) -> String {
        match self {
            Evidence::Exhaustive {
                domain,
                configurations,
            } => format!("exhaustive over {domain}, {configurations} configurations"),
            Evidence::Randomized { trials, seed } => {
                format!("randomized, {trials} trials, seed {seed}")
            }
            Evidence::Execution => "single execution".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
}

impl Finding {
    pub fn new(kind: impl Into<String>, message: impl Into<String>) -> Finding {
        Finding {
            kind: kind.into(),
            message: message.into(),
            data: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<String>) -> Finding {
        self.data.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub status: Status,
    pub evidence: Evidence,
    pub findings: Vec<Finding>,
    pub timing_millis: u64,
}

impl Report {
    pub fn new(tool: impl Into<String>, status: Status, evidence: Evidence) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: tool.into(),
            status,
            evidence,
            findings: Vec::new(),
            timing_millis: 0,
        }
    }

    pub fn finding(mut self, f: Finding) -> Report {
        self.findings.push(f);
        self
    }

    pub fn findings(mut self, fs: impl IntoIterator<Item = Finding>) -> Report {
        self.findings.extend(fs);
        self
    }

    /// A failing report must explain itself.
    pub fn check_well_formed(&self) {
        if self.status == Status::Fail {
            assert!(
                !self.findings.is_empty(),
                "fail report without findings ({})",
                self.tool
            );
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Machine => serde_json::to_string_pretty(r).expect("report serializes"),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{} ({}, {} ms)",
                r.status.label(),
                r.evidence.describe(),
                r.timing_millis
            );
            for f in &r.findings {
                let _ = writeln!(out, "  {}: {}", f.kind, f.message);
                for (k, v) in &f.data {
                    let _ = writeln!(out, "    {k}: {v}");
                }
            }
            out
        }
    }
}

#[cfg(test)]
pub fn parse_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}
