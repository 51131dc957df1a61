//   Copyright 2026 hypersupport developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::OutputFormat;
use crate::error::{Error, Result};
use crate::verify::Strategy;

/// One strategy evaluated on one instance. Field order is the CSV column
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub trial_id: String,
    pub body_kind: String,
    pub thinness: f64,
    pub s: f64,
    pub s0: f64,
    pub strategy: Strategy,
    pub ratio: f64,
    pub bound: f64,
    pub depth: usize,
    pub case_terminated: String,
    pub perturbed: bool,
    pub wall_ms: f64,
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Numerical(e.to_string()))
}

pub fn rows_to_json(rows: &[ReportRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn read_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_json(text: &str) -> Result<Vec<ReportRow>> {
    Ok(serde_json::from_str(text)?)
}

/// Drops the `wall_ms` column so that two CSV reports can be compared
/// byte for byte.
pub fn csv_without_wall_ms(text: &str) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut out = csv::Writer::from_writer(Vec::new());
    let mut drop = None;
    for record in reader.records() {
        let record = record?;
        let idx = *drop.get_or_insert_with(|| record.iter().position(|f| f == "wall_ms"));
        out.write_record(
            record
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != idx)
                .map(|(_, f)| f),
        )?;
    }
    let bytes = out.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

/// Worst ratio of one strategy at one `s` within a `(n, body_kind,
/// thinness)` series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub n: usize,
    pub body_kind: String,
    pub thinness: f64,
    pub strategy: Strategy,
    pub s: f64,
    pub worst_ratio: f64,
}

pub fn plot_series(rows: &[ReportRow]) -> Vec<PlotPoint> {
    let mut points: Vec<PlotPoint> = Vec::new();
    let mut sorted: Vec<&ReportRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (a.n, &a.body_kind)
            .cmp(&(b.n, &b.body_kind))
            .then(b.thinness.total_cmp(&a.thinness))
            .then(a.strategy.cmp(&b.strategy))
            .then(b.s.total_cmp(&a.s))
    });
    for r in sorted {
        match points.last_mut() {
            Some(p)
                if p.n == r.n
                    && p.body_kind == r.body_kind
                    && p.thinness == r.thinness
                    && p.strategy == r.strategy
                    && p.s == r.s =>
            {
                p.worst_ratio = p.worst_ratio.max(r.ratio);
            }
            _ => points.push(PlotPoint {
                n: r.n,
                body_kind: r.body_kind.clone(),
                thinness: r.thinness,
                strategy: r.strategy,
                s: r.s,
                worst_ratio: r.ratio,
            }),
        }
    }
    points
}

pub fn write_plotdata(rows: &[ReportRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for p in plot_series(rows) {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln ratio` against `ln s`, ignoring non-positive
/// entries. `None` with fewer than two distinct usable `s` values.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(s, r)| *s > 0.0 && *r > 0.0)
        .map(|(s, r)| (s.ln(), r.ln()))
        .collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (logs.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

/// Writes the report to `report` (standard output when `None`) and the
/// plot data to `plotdata` when given.
pub fn emit(rows: &[ReportRow], format: OutputFormat, report: Option<&Path>, plotdata: Option<&Path>) -> Result<()> {
    let mut out: Box<dyn Write> = match report {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        OutputFormat::Csv => write_csv(rows, &mut out)?,
        OutputFormat::Json => {
            out.write_all(rows_to_json(rows)?.as_bytes())?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    if let Some(path) = plotdata {
        write_plotdata(rows, path)?;
    }
    Ok(())
}
