//! Diagnostics CSV: one record per row, fixed column order, 17 significant
//! digits so every value round-trips to the exact f64.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sqg_core::DiagnosticsRecord;

use crate::error::AppError;

pub const HEADER: &str =
    "t,energy_modified,l2,grad_l2,linf_max,linf_min,blowup_indicator,blowup_indicator_sq,mean";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_row(r: &DiagnosticsRecord) -> String {
    [
        r.t,
        r.energy_modified,
        r.l2,
        r.grad_l2,
        r.linf_max,
        r.linf_min,
        r.blowup_indicator,
        r.blowup_indicator_sq,
        r.mean,
    ]
    .map(fmt)
    .join(",")
}

pub fn parse_row(line: &str) -> Result<DiagnosticsRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 9 {
        return Err(format!("expected 9 columns, found {}", fields.len()));
    }
    let mut vals = [0.0f64; 9];
    for (i, f) in fields.iter().enumerate() {
        vals[i] = f.trim().parse::<f64>().map_err(|_| format!("column {i} is not a number"))?;
    }
    Ok(DiagnosticsRecord {
        t: vals[0],
        energy_modified: vals[1],
        l2: vals[2],
        grad_l2: vals[3],
        linf_max: vals[4],
        linf_min: vals[5],
        blowup_indicator: vals[6],
        blowup_indicator_sq: vals[7],
        mean: vals[8],
    })
}

/// Reads a diagnostics CSV (header expected on the first line).
pub fn read_series(path: &Path) -> Result<Vec<DiagnosticsRecord>, AppError> {
    let text = fs::read_to_string(path).map_err(|e| AppError::Io(path.to_path_buf(), e))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line.trim() != HEADER {
                return Err(AppError::config(format!(
                    "'{}' does not look like a diagnostics CSV (bad header)",
                    path.display()
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_row(line).map_err(|msg| {
            AppError::config(format!("'{}' line {}: {msg}", path.display(), idx + 1))
        })?);
    }
    Ok(out)
}

/// Streaming writer that flushes each row, so truncated runs keep every
/// record emitted before the failure.
pub struct SeriesWriter {
    path: PathBuf,
    file: BufWriter<fs::File>,
}

impl SeriesWriter {
    pub fn create(path: &Path) -> Result<SeriesWriter, AppError> {
        let wrap = |e: std::io::Error| AppError::Io(path.to_path_buf(), e);
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(wrap)?;
            }
        }
        let mut file = BufWriter::new(fs::File::create(path).map_err(wrap)?);
        writeln!(file, "{HEADER}").map_err(wrap)?;
        Ok(SeriesWriter { path: path.to_path_buf(), file })
    }

    pub fn push(&mut self, record: &DiagnosticsRecord) -> Result<(), AppError> {
        let wrap = |e: std::io::Error| AppError::Io(self.path.clone(), e);
        writeln!(self.file, "{}", format_row(record)).map_err(wrap)?;
        self.file.flush().map_err(wrap)
    }
}

/// Writes an entire series at once.
pub fn write_series(path: &Path, series: &[DiagnosticsRecord]) -> Result<(), AppError> {
    let mut w = SeriesWriter::create(path)?;
    for r in series {
        w.push(r)?;
    }
    Ok(())
}
