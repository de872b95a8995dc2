//! Measurement files: `k,y` CSV plus a JSON sidecar next to it
//! (`trace.csv` pairs with `trace.json`) holding the time domain and
//! provenance.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use lapspec::{MeasurementSeries, SeriesMeta, TimeDomain};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub domain: TimeDomain,
    #[serde(flatten)]
    pub meta: SeriesMeta,
}

#[derive(Serialize, Deserialize)]
struct Row {
    k: usize,
    y: f64,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_trace_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::csv(path))?;
    for (k, &y) in values.iter().enumerate() {
        w.serialize(Row { k, y }).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(CliError::io(path))?;
    let mut r = csv::Reader::from_reader(file);
    let headers = r.headers().map_err(CliError::csv(path))?;
    if headers != vec!["k", "y"] {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "expected header `k,y`".into(),
        });
    }
    let mut values = Vec::new();
    for (idx, row) in r.deserialize::<Row>().enumerate() {
        let row = row.map_err(CliError::csv(path))?;
        if row.k != idx {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: idx + 2,
                message: format!("expected k = {idx}, found {}", row.k),
            });
        }
        values.push(row.y);
    }
    Ok(values)
}

/// Writes the CSV and its sidecar.
pub fn write_series(csv_path: &Path, series: &MeasurementSeries) -> Result<()> {
    write_trace_csv(csv_path, series.values())?;
    let sidecar = Sidecar {
        domain: series.domain(),
        meta: series.meta().clone(),
    };
    crate::reports::write_json(&sidecar_path(csv_path), &sidecar)
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(CliError::json(path))
}

/// Reads a series. Without a sidecar, `fallback` supplies the domain.
pub fn read_series(csv_path: &Path, fallback: Option<TimeDomain>) -> Result<MeasurementSeries> {
    let values = read_trace_csv(csv_path)?;
    let side = sidecar_path(csv_path);
    let (domain, meta) = if side.exists() {
        let s = read_sidecar(&side)?;
        (s.domain, s.meta)
    } else if let Some(d) = fallback {
        (d, SeriesMeta::default())
    } else {
        return Err(CliError::Config(format!(
            "{} has no sidecar; give the time domain explicitly",
            csv_path.display()
        )));
    };
    let series = MeasurementSeries::new(values, domain).map_err(|e| CliError::Parse {
        path: csv_path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok(series.with_meta(meta))
}
