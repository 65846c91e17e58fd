//! Range scans over `|Δ| ≤ N`.
//!
//! Fields are processed on a bounded rayon pool; results are collected in
//! input order, so output does not depend on the number of workers.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use redei8_core::redei::{fields_up_to, FieldSpec};

use crate::report::{build_report, FieldReport, ReportError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    pub max_abs_delta: u64,
    /// Restrict to fields with this many primes.
    pub t: Option<usize>,
    pub oracle: bool,
    pub jobs: usize,
}

#[derive(Debug)]
pub struct ScanOutcome {
    pub records: Vec<FieldReport>,
    /// Fields whose computation failed outright.
    pub failures: Vec<(FieldSpec, ReportError)>,
}

impl ScanOutcome {
    pub fn inconsistent(&self) -> impl Iterator<Item = &FieldReport> {
        self.records.iter().filter(|r| !r.consistent)
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.inconsistent().next().is_none()
    }

    /// Number of fields in each `(r4, r8)` cell.
    pub fn cell_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut cells = BTreeMap::new();
        for r in &self.records {
            *cells.entry((r.r4, r.r8)).or_insert(0) += 1;
        }
        cells
    }
}

pub fn run_scan(opts: &ScanOptions) -> Result<ScanOutcome, rayon::ThreadPoolBuildError> {
    let fields = fields_up_to(opts.max_abs_delta, opts.t);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build()?;
    let results: Vec<(FieldSpec, Result<FieldReport, ReportError>)> = pool.install(|| {
        fields
            .into_par_iter()
            .map(|f| {
                let r = build_report(&f, opts.oracle);
                (f, r)
            })
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (field, result) in results {
        match result {
            Ok(r) => records.push(r),
            Err(e) => failures.push((field, e)),
        }
    }
    Ok(ScanOutcome { records, failures })
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(records: &[FieldReport], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_summary<W: Write>(outcome: &ScanOutcome, mut out: W) -> io::Result<()> {
    writeln!(out, "fields: {}", outcome.records.len() + outcome.failures.len())?;
    writeln!(out, "{:>4} {:>4} {:>8}", "r4", "r8", "count")?;
    for ((r4, r8), n) in outcome.cell_counts() {
        writeln!(out, "{r4:>4} {r8:>4} {n:>8}")?;
    }
    let bad: Vec<&FieldReport> = outcome.inconsistent().collect();
    writeln!(out, "inconsistent: {}", bad.len())?;
    for r in bad {
        writeln!(out, "  inconsistent field {:?} (delta {})", r.primes, r.delta)?;
    }
    for (f, e) in &outcome.failures {
        writeln!(out, "  failed field {:?}: {e}", f.primes())?;
    }
    Ok(())
}
