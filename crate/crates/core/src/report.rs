//! Benchmark report assembly and emission (CSV / JSON).
//!
//! Floating-point fields are printed with 12 significant digits in both
//! formats; the JSON numbers are the parsed-back values of that printing,
//! so an emit/parse round trip reproduces every numeric field exactly.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenario::RejectedFeature;
use crate::selection::SelectionResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv|json)")),
        }
    }
}

/// One benchmark row: one algorithm on one seed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportRow {
    pub algorithm: String,
    pub seed: u64,
    pub q: usize,
    pub epsilon: f64,
    pub n: usize,
    pub objective_value: f64,
    pub measure_variance: f64,
    pub measure_entropy: f64,
    pub measure_spectral: f64,
    pub eval_count: u64,
    pub wall_time_s: f64,
    /// Ascending feature ids.
    pub selected_ids: Vec<u32>,
}

impl ReportRow {
    pub fn from_result(
        algorithm: &str,
        seed: u64,
        q: usize,
        epsilon: f64,
        n: usize,
        result: &SelectionResult,
    ) -> Self {
        let mut ids = result.selected.clone();
        ids.sort_unstable();
        Self {
            algorithm: algorithm.to_string(),
            seed,
            q,
            epsilon: round_sig12(epsilon),
            n,
            objective_value: round_sig12(result.objective_value),
            measure_variance: round_sig12(result.measures.variance),
            measure_entropy: round_sig12(result.measures.entropy),
            measure_spectral: round_sig12(result.measures.spectral),
            eval_count: result.eval_count,
            wall_time_s: round_sig12(result.wall_time),
            selected_ids: ids,
        }
    }
}

/// Per-seed scenario construction cost, kept out of the per-row selection
/// timings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstructionRow {
    pub seed: u64,
    pub wall_time_s: f64,
    pub candidates: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchReport {
    /// Hash of the resolved config and RNG choice.
    pub digest: String,
    pub rng: String,
    pub construction: Vec<ConstructionRow>,
    pub rejected: Vec<RejectedRecord>,
    pub rows: Vec<ReportRow>,
}

/// Rejected feature echoed into the report (one line per seed x feature).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RejectedRecord {
    pub seed: u64,
    pub id: u32,
    pub reason: String,
}

impl RejectedRecord {
    pub fn from_rejected(seed: u64, rejected: &RejectedFeature) -> Self {
        Self {
            seed,
            id: rejected.id,
            reason: rejected.reason.clone(),
        }
    }
}

/// 12-significant-digit decimal form, parseable back to the same f64.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

/// The f64 nearest the 12-significant-digit printing of `x`.
pub fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().expect("formatted float parses")
}

pub const CSV_HEADER: &str = "algorithm,seed,q,epsilon,n,objective_value,measure_variance,\
measure_entropy,measure_spectral,eval_count,wall_time_s,selected_ids";

pub fn to_csv(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let ids: Vec<String> = row.selected_ids.iter().map(|id| id.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.algorithm,
            row.seed,
            row.q,
            format_sig12(row.epsilon),
            row.n,
            format_sig12(row.objective_value),
            format_sig12(row.measure_variance),
            format_sig12(row.measure_entropy),
            format_sig12(row.measure_spectral),
            row.eval_count,
            format_sig12(row.wall_time_s),
            ids.join(";"),
        ));
    }
    out
}

pub fn to_json(report: &BenchReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn emit_report(report: &BenchReport, format: ReportFormat, path: &Path) -> std::io::Result<()> {
    let text = match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Json => to_json(report),
    };
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())
}
