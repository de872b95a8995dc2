//! JSON and CSV outputs: estimates, match reports and plot data.

use std::fs;
use std::path::Path;

use lapspec::{MatchReport, MatchedPair, SpectralEstimate};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::json(path))?;
    text.push('\n');
    fs::write(path, text).map_err(CliError::io(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(CliError::json(path))
}

pub fn read_estimate(path: &Path) -> Result<SpectralEstimate> {
    read_json(path)
}

/// Serialized form of a [`MatchReport`] with its summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_truth: Vec<f64>,
    pub unmatched_estimate: Vec<f64>,
    pub matched: usize,
    pub exact: bool,
    pub max_error: f64,
    pub mean_error: f64,
}

impl From<&MatchReport> for MatchSummary {
    fn from(r: &MatchReport) -> Self {
        MatchSummary {
            pairs: r.pairs.clone(),
            unmatched_truth: r.unmatched_truth.clone(),
            unmatched_estimate: r.unmatched_estimate.clone(),
            matched: r.pairs.len(),
            exact: r.is_exact(),
            max_error: r.max_error,
            mean_error: r.mean_error(),
        }
    }
}

#[derive(Serialize)]
struct MatchRow {
    #[serde(rename = "true")]
    truth: Option<f64>,
    estimated: Option<f64>,
    error: Option<f64>,
}

/// One row per matched pair, then unmatched values with the other cells
/// empty.
pub fn write_match_csv(path: &Path, report: &MatchReport) -> Result<()> {
    let mut rows: Vec<MatchRow> = report
        .pairs
        .iter()
        .map(|p| MatchRow {
            truth: Some(p.truth),
            estimated: Some(p.estimate),
            error: Some(p.error),
        })
        .collect();
    rows.extend(report.unmatched_truth.iter().map(|&t| MatchRow {
        truth: Some(t),
        estimated: None,
        error: None,
    }));
    rows.extend(report.unmatched_estimate.iter().map(|&e| MatchRow {
        truth: None,
        estimated: Some(e),
        error: None,
    }));
    write_rows(path, &rows, &["true", "estimated", "error"])
}

#[derive(Serialize)]
struct CompareRow {
    index: usize,
    #[serde(rename = "true")]
    truth: Option<f64>,
    estimated: Option<f64>,
}

/// `index,true,estimated`: every truth value in ascending order with its
/// matched estimate (blank when missed), then unmatched estimates.
pub fn write_eigencompare_csv(path: &Path, truth: &[f64], report: &MatchReport) -> Result<()> {
    let mut sorted = truth.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows: Vec<CompareRow> = sorted
        .iter()
        .enumerate()
        .map(|(index, &t)| CompareRow {
            index,
            truth: Some(t),
            estimated: report
                .pairs
                .iter()
                .find(|p| p.truth.to_bits() == t.to_bits())
                .map(|p| p.estimate),
        })
        .collect();
    for &e in &report.unmatched_estimate {
        rows.push(CompareRow {
            index: rows.len(),
            truth: None,
            estimated: Some(e),
        });
    }
    write_rows(path, &rows, &["index", "true", "estimated"])
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    // written by hand so an empty table still gets its header
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(CliError::csv(path))?;
    w.write_record(header).map_err(CliError::csv(path))?;
    for row in rows {
        w.serialize(row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}
