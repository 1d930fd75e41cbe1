//! Check results and the line-delimited report format.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::Caps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Vacuous,
    Violated,
    Skipped,
}

impl Status {
    pub const ALL: [Status; 4] = [Status::Verified, Status::Vacuous, Status::Violated, Status::Skipped];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Vacuous => "vacuous",
            Status::Violated => "violated",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier of a hypothesis-to-conclusion check. Declaration order is report order.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    L2_1a,
    L2_1b,
    C2_2,
    C2_3,
    L2_4i,
    L2_4ii,
    C2_5,
    L2_6,
    L2_7,
    C2_8,
    C2_9,
    C2_10,
    A1,
    A2,
    A3,
    A4,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::L2_1a,
        CheckId::L2_1b,
        CheckId::C2_2,
        CheckId::C2_3,
        CheckId::L2_4i,
        CheckId::L2_4ii,
        CheckId::C2_5,
        CheckId::L2_6,
        CheckId::L2_7,
        CheckId::C2_8,
        CheckId::C2_9,
        CheckId::C2_10,
        CheckId::A1,
        CheckId::A2,
        CheckId::A3,
        CheckId::A4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::L2_1a => "L2_1a",
            CheckId::L2_1b => "L2_1b",
            CheckId::C2_2 => "C2_2",
            CheckId::C2_3 => "C2_3",
            CheckId::L2_4i => "L2_4i",
            CheckId::L2_4ii => "L2_4ii",
            CheckId::C2_5 => "C2_5",
            CheckId::L2_6 => "L2_6",
            CheckId::L2_7 => "L2_7",
            CheckId::C2_8 => "C2_8",
            CheckId::C2_9 => "C2_9",
            CheckId::C2_10 => "C2_10",
            CheckId::A1 => "A1",
            CheckId::A2 => "A2",
            CheckId::A3 => "A3",
            CheckId::A4 => "A4",
        }
    }

    /// Parses `all` or a comma-separated list of ids.
    pub fn parse_list(text: &str) -> Result<Vec<CheckId>> {
        if text.trim() == "all" {
            return Ok(CheckId::ALL.to_vec());
        }
        let mut ids = text.split(',').map(|t| t.trim().parse()).collect::<Result<Vec<CheckId>>>()?;
        ids.sort();
        ids.dedup();
        Ok(ids)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub group: String,
    pub degree: usize,
    /// Decimal string, or `unknown` when the order could not be computed.
    pub order: String,
    pub check: CheckId,
    pub status: Status,
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub caps: Caps,
    pub corpus_digest: String,
}

impl Metadata {
    pub fn new(caps: Caps, corpus_digest: String) -> Self {
        Metadata { tool: "pga".into(), version: env!("CARGO_PKG_VERSION").into(), caps, corpus_digest }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub verified: usize,
    pub vacuous: usize,
    pub violated: usize,
    pub skipped: usize,
}

impl Counts {
    pub fn get(&self, s: Status) -> usize {
        match s {
            Status::Verified => self.verified,
            Status::Vacuous => self.vacuous,
            Status::Violated => self.violated,
            Status::Skipped => self.skipped,
        }
    }

    fn bump(&mut self, s: Status) {
        match s {
            Status::Verified => self.verified += 1,
            Status::Vacuous => self.vacuous += 1,
            Status::Violated => self.violated += 1,
            Status::Skipped => self.skipped += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub metadata: Metadata,
    pub entries: Vec<CheckResult>,
}

impl Report {
    pub fn new(metadata: Metadata, mut entries: Vec<CheckResult>) -> Self {
        entries.sort_by(|a, b| (a.group.as_str(), a.check).cmp(&(b.group.as_str(), b.check)));
        Report { metadata, entries }
    }

    pub fn summary(&self) -> BTreeMap<CheckId, Counts> {
        let mut out: BTreeMap<CheckId, Counts> = BTreeMap::new();
        for e in &self.entries {
            out.entry(e.check).or_default().bump(e.status);
        }
        out
    }

    pub fn total(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// Metadata line followed by one line per result, each newline-terminated.
    pub fn to_lines(&self) -> String {
        let mut out = serde_json::to_string(&self.metadata).expect("metadata serializes");
        out.push('\n');
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("result serializes"));
            out.push('\n');
        }
        out
    }

    /// Result lines with `elapsed_ms` zeroed, for determinism comparisons.
    pub fn body_without_timing(&self) -> String {
        self.entries
            .iter()
            .map(|e| {
                let e = CheckResult { elapsed_ms: 0, ..e.clone() };
                serde_json::to_string(&e).expect("result serializes") + "\n"
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| Error::Parse { line: 1, msg: "missing metadata line".into() })?;
        let metadata: Metadata =
            serde_json::from_str(first).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
        let entries = lines
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() }))
            .collect::<Result<Vec<CheckResult>>>()?;
        Ok(Report { metadata, entries })
    }
}

pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(report.to_lines().as_bytes())?;
    f.flush()?;
    Ok(())
}
