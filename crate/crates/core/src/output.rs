//! CSV and JSON serialization of computed datasets.
//!
//! CSV: comma separated, header row, LF endings. JSON documents carry a
//! top-level `schema` version next to the payload.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::EdgeReport;
use crate::error::{Error, Result};
use crate::response::{ResponseProfile, ScanPoint};
use crate::sweep::{PhaseDiagram, SpectrumSweep};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema: u32,
    pub kind: String,
    pub data: T,
}

impl<T> Document<T> {
    pub fn new(kind: impl Into<String>, data: T) -> Self {
        Document {
            schema: SCHEMA_VERSION,
            kind: kind.into(),
            data,
        }
    }
}

pub fn to_json<T: Serialize>(kind: &str, data: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document::new(kind, data))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<Document<T>> {
    let doc: Document<T> = serde_json::from_str(text)?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::InvalidParameter(format!(
            "unsupported schema version {}",
            doc.schema
        )));
    }
    Ok(doc)
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows `(param, index, energy, label)`; the first column is named after the axis.
pub fn sweep_csv(sweep: &SpectrumSweep) -> Result<String> {
    let mut w = writer();
    w.write_record([sweep.axis.name.as_str(), "index", "energy", "label"])?;
    for (x, report) in sweep.iter() {
        for s in &report.states {
            w.serialize((x, s.index, s.energy, s.label.as_str()))?;
        }
    }
    finish(w)
}

pub fn report_csv(report: &EdgeReport) -> Result<String> {
    let mut w = writer();
    w.write_record(["index", "energy", "label", "center", "ipr"])?;
    for s in &report.states {
        w.serialize((s.index, s.energy, s.label.as_str(), s.center, s.ipr))?;
    }
    finish(w)
}

/// Long-format grid: one `(x, y, region)` row per cell.
pub fn diagram_csv(d: &PhaseDiagram) -> Result<String> {
    let mut w = writer();
    w.write_record([d.x_axis.name.as_str(), d.y_axis.name.as_str(), "region"])?;
    for (ix, x) in d.x_axis.values.iter().enumerate() {
        for (iy, y) in d.y_axis.values.iter().enumerate() {
            w.serialize((x, y, d.at(ix, iy).roman()))?;
        }
    }
    finish(w)
}

pub fn response_csv(profile: &ResponseProfile) -> Result<String> {
    let mut w = writer();
    w.write_record(["site", "photon_number"])?;
    for (j, n) in profile.photon_numbers.iter().enumerate() {
        w.serialize((j + 1, n))?;
    }
    finish(w)
}

pub fn scan_csv(scan: &[ScanPoint]) -> Result<String> {
    let mut w = writer();
    w.write_record(["omega", "site", "photon_number"])?;
    for p in scan {
        for (j, n) in p.profile.photon_numbers.iter().enumerate() {
            w.serialize((p.omega, j + 1, n))?;
        }
    }
    finish(w)
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_text(dir: &Path, name: &str, contents: &str) -> Result<std::path::PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
