//! Per-field report and its JSON-lines schema.

use std::fmt::Write as _;

use redei8_core::bqf::{two_power_ranks, BqfError, ClassGroupTable};
use redei8_core::redei::{eight_rank_report, EightRankReport, FieldSpec, RedeiError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("field {delta}: {source}")]
    Redei { delta: i64, source: RedeiError },
    #[error("field {delta}: class group oracle failed: {source}")]
    Oracle { delta: i64, source: BqfError },
}

/// Class group ranks read off the composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub h: usize,
    pub r2: usize,
    pub r4: usize,
    pub r8: usize,
    /// Orders of the cyclic factors of the 2-Sylow subgroup, ascending.
    pub elementary_divisor_2part: Vec<u64>,
}

/// One line of scan output. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    pub primes: Vec<u64>,
    pub delta: i64,
    pub r2: usize,
    pub r4: usize,
    pub r8: usize,
    pub rho: usize,
    pub predicted: Vec<usize>,
    pub qb_diagonal: Vec<u8>,
    pub b_matrix: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub consistent: bool,
}

impl FieldReport {
    /// `r8 ∈ predicted`, and the oracle ranks agree when present.
    pub fn check_consistency(&self) -> bool {
        self.predicted.contains(&self.r8)
            && self.oracle.as_ref().is_none_or(|o| o.r2 == self.r2 && o.r4 == self.r4 && o.r8 == self.r8)
    }
}

pub fn oracle_summary(delta: i64) -> Result<OracleSummary, BqfError> {
    let table = ClassGroupTable::build(delta)?;
    let ranks = two_power_ranks(&table);
    Ok(OracleSummary {
        h: table.h(),
        r2: ranks.r2(),
        r4: ranks.r4(),
        r8: ranks.r8(),
        elementary_divisor_2part: ranks.elementary_divisors_2part(),
    })
}

pub fn build_report(field: &FieldSpec, with_oracle: bool) -> Result<FieldReport, ReportError> {
    let delta = field.delta();
    let eight = eight_rank_report(field).map_err(|source| ReportError::Redei { delta, source })?;
    let oracle = if with_oracle {
        Some(oracle_summary(delta).map_err(|source| ReportError::Oracle { delta, source })?)
    } else {
        None
    };
    Ok(assemble(field, &eight, oracle))
}

fn assemble(field: &FieldSpec, eight: &EightRankReport, oracle: Option<OracleSummary>) -> FieldReport {
    let mut report = FieldReport {
        primes: field.primes().to_vec(),
        delta: field.delta(),
        r2: eight.r2(),
        r4: eight.r4(),
        r8: eight.r8,
        rho: eight.rho,
        predicted: eight.predicted.iter().copied().collect(),
        qb_diagonal: eight.qb_diagonal(),
        b_matrix: eight.b_matrix.to_rows(),
        oracle,
        consistent: false,
    };
    report.consistent = report.check_consistency();
    report
}

fn format_set(values: &[usize]) -> String {
    let items: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn format_matrix(rows: &[Vec<u8>]) -> String {
    if rows.is_empty() {
        return "[]".to_string();
    }
    let rows: Vec<String> = rows.iter().map(|r| r.iter().map(u8::to_string).collect::<String>()).collect();
    format!("[{}]", rows.join(";"))
}

/// Human-readable table for the `field` command.
pub fn render_table(field: &FieldSpec, report: &FieldReport) -> String {
    let eight = eight_rank_report(field).ok();
    let mut out = String::new();
    let product: Vec<String> = report.primes.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "{:<12}{} = -{}", "delta", report.delta, product.join("*"));
    let _ = writeln!(out, "{:<12}{}", "t", report.primes.len());
    let _ = writeln!(out, "{:<12}{}, {}, {}", "r2, r4, r8", report.r2, report.r4, report.r8);
    if let Some(eight) = &eight {
        let _ = writeln!(out, "{:<12}{}", "M4", format_matrix(&eight.redei.m4.to_rows()));
        let basis: Vec<String> = eight.redei.v0_basis.iter().map(|d| d.value().to_string()).collect();
        let _ = writeln!(out, "{:<12}[{}]", "V0 basis", basis.join(", "));
        let c = &eight.classification;
        let arf = c.arf.map_or("undefined".to_string(), |a| a.to_string());
        let _ = writeln!(
            out,
            "{:<12}{:?}: {}, rank {}, defect {}, arf {}, #zeros {}",
            "Q_B", eight.qb, c.form_type, c.rank, c.defect, arf, c.zero_count
        );
        let _ = writeln!(out, "{:<12}{}", "log2 bound", eight.log2_zero_bound);
    }
    let _ = writeln!(out, "{:<12}{}", "B", format_matrix(&report.b_matrix));
    let _ = writeln!(out, "{:<12}{}", "rho", report.rho);
    let _ = writeln!(out, "{:<12}{}", "predicted", format_set(&report.predicted));
    if let Some(o) = &report.oracle {
        let cyclic: Vec<String> = o.elementary_divisor_2part.iter().map(|d| format!("Z/{d}")).collect();
        let two_part = if cyclic.is_empty() { "trivial".to_string() } else { cyclic.join(" x ") };
        let _ = writeln!(
            out,
            "{:<12}h = {}, (r2, r4, r8) = ({}, {}, {}), 2-part {}",
            "oracle", o.h, o.r2, o.r4, o.r8, two_part
        );
    }
    let _ = writeln!(out, "{:<12}{}", "consistent", if report.consistent { "yes" } else { "NO" });
    out
}
