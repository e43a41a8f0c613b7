//! Machine-readable check reports, one JSON object per line.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl CheckReport {
    pub fn new(check: &str, status: Status, witness: Option<serde_json::Value>) -> CheckReport {
        debug_assert!(
            status != Status::Fail || witness.is_some(),
            "a failing report must carry a witness"
        );
        CheckReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            status,
            witness,
            elapsed_ms: 0,
            seed: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> CheckReport {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> CheckReport {
        self.seed = Some(seed);
        self
    }

    pub fn timed(mut self, start: Instant) -> CheckReport {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }
}

/// Serializes report lines to a file or standard output.
pub struct ReportWriter {
    out: Box<dyn Write>,
    statuses: Vec<Status>,
}

impl ReportWriter {
    pub fn to_path(path: Option<&Path>) -> io::Result<ReportWriter> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout()),
        };
        Ok(ReportWriter {
            out,
            statuses: Vec::new(),
        })
    }

    pub fn emit(&mut self, report: &CheckReport) -> io::Result<()> {
        let line = serde_json::to_string(report).expect("reports serialize");
        writeln!(self.out, "{line}")?;
        self.statuses.push(report.status);
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<i32> {
        self.out.flush()?;
        let any_fail = self.statuses.iter().any(|s| *s == Status::Fail);
        let any_inconclusive = self.statuses.iter().any(|s| *s == Status::Inconclusive);
        Ok(if any_fail {
            1
        } else if any_inconclusive {
            3
        } else {
            0
        })
    }
}
