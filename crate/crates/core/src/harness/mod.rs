//! Runs the fixity checks over a corpus and collects a [`Report`].

mod analysis;
mod checks;

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

pub use analysis::{analyze, GroupAnalysis};
pub use checks::{check as evaluate, Verdict};

use crate::corpus::{corpus_digest, CorpusEntry};
use crate::error::{Error, Result};
use crate::report::{CheckId, CheckResult, Metadata, Report, Status};
use crate::Caps;

/// Evaluates one check into a report line with zero elapsed time.
pub fn check(id: CheckId, a: &GroupAnalysis) -> CheckResult {
    let v = checks::check(id, a);
    CheckResult {
        group: a.name().to_string(),
        degree: a.degree(),
        order: a.order_factored.value().to_string(),
        check: id,
        status: v.status,
        witness: v.witness,
        elapsed_ms: 0,
    }
}

fn run_entry(entry: &CorpusEntry, selection: &[CheckId], caps: &Caps) -> Vec<CheckResult> {
    let start = Instant::now();
    let analysis = analyze(entry, caps);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match analysis {
        Ok(a) => selection.iter().map(|&id| CheckResult { elapsed_ms, ..check(id, &a) }).collect(),
        Err(e) => {
            let order = entry.group.order().map_or_else(|_| "unknown".to_string(), |o| o.to_string());
            selection
                .iter()
                .map(|&id| CheckResult {
                    group: entry.name.clone(),
                    degree: entry.declared_degree,
                    order: order.clone(),
                    check: id,
                    status: Status::Skipped,
                    witness: Some(json!({ "error": e.to_string() })),
                    elapsed_ms,
                })
                .collect()
        }
    }
}

/// Analyzes every entry on `jobs` worker threads and evaluates the selected checks.
/// The report is sorted, so its body does not depend on `jobs`.
pub fn run_all(corpus: &[CorpusEntry], selection: &[CheckId], jobs: usize, caps: &Caps) -> Result<Report> {
    if jobs == 0 {
        return Err(Error::InvalidParams("jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Io(e.to_string()))?;
    let mut selection = selection.to_vec();
    selection.sort();
    selection.dedup();
    let lines: Vec<CheckResult> =
        pool.install(|| corpus.par_iter().flat_map_iter(|e| run_entry(e, &selection, caps)).collect());
    Ok(Report::new(Metadata::new(*caps, corpus_digest(corpus)), lines))
}
