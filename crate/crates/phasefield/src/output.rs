//! CSV artifacts: the per-run time-series file and field snapshots.
//!
//! Both formats are plain text with LF newlines and 12-significant-digit
//! scientific notation, so any plotting tool can load them and repeated runs
//! can be compared byte for byte. Readers parse exactly what the writers
//! emit (round-trip property).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::TimeSeriesRecord;
use crate::error::{Error, Result};
use crate::grid::Field;

/// Column header of the time-series CSV.
pub const TIMESERIES_HEADER: &str = "step,time,volume,interface_pos,interface_width,enthalpy";

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.11e}"),
        None => String::new(),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Writes diagnostic records as CSV: one header line, one row per record,
/// absent diagnostics as empty cells. Refuses an empty record list.
pub fn write_timeseries_csv(records: &[TimeSeriesRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Usage(
            "write_timeseries_csv: no records to write".into(),
        ));
    }
    let mut text = String::with_capacity(64 * (records.len() + 1));
    text.push_str(TIMESERIES_HEADER);
    text.push('\n');
    for r in records {
        writeln!(
            text,
            "{},{:.11e},{:.11e},{},{},{}",
            r.step,
            r.time,
            r.volume,
            fmt_opt(r.interface_pos),
            fmt_opt(r.interface_width),
            fmt_opt(r.enthalpy)
        )
        .expect("writing to a String cannot fail");
    }
    write_file(path, &text)
}

/// Name of a snapshot file: `<name>_<step, zero-padded to 6>.csv`.
pub fn snapshot_filename(name: &str, step: u64) -> String {
    format!("{name}_{step:06}.csv")
}

/// Writes one field as `x,y,value` rows over the interior cells
/// (cell-center coordinates, row-major with x fastest). Returns the path it
/// wrote.
pub fn write_snapshot(field: &Field, name: &str, step: u64, outdir: &Path) -> Result<PathBuf> {
    let spec = field.spec();
    let mut text = String::with_capacity(48 * spec.nx() * spec.ny() + 16);
    text.push_str("x,y,value\n");
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            writeln!(text, "{:.11e},{:.11e},{:.11e}", spec.x(i), spec.y(j), field.get(i, j))
                .expect("writing to a String cannot fail");
        }
    }
    let path = outdir.join(snapshot_filename(name, step));
    write_file(&path, &text)?;
    Ok(path)
}

fn csv_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::CsvParse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_cell(path: &Path, line: usize, column: &str, raw: &str) -> Result<f64> {
    raw.parse()
        .map_err(|_| csv_err(path, line, format!("column {column}: `{raw}` is not a number")))
}

fn parse_opt_cell(path: &Path, line: usize, column: &str, raw: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        Ok(None)
    } else {
        parse_cell(path, line, column, raw).map(Some)
    }
}

/// Reads a time-series CSV written by [`write_timeseries_csv`].
pub fn read_timeseries_csv(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == TIMESERIES_HEADER => {}
        Some((_, header)) => {
            return Err(csv_err(
                path,
                1,
                format!("expected header `{TIMESERIES_HEADER}`, got `{header}`"),
            ))
        }
        None => return Err(csv_err(path, 1, "empty file")),
    }
    let mut records = Vec::new();
    for (k, line) in lines {
        let line_no = k + 1;
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(csv_err(
                path,
                line_no,
                format!("expected 6 columns, got {}", parts.len()),
            ));
        }
        records.push(TimeSeriesRecord {
            step: parts[0].parse().map_err(|_| {
                csv_err(path, line_no, format!("column step: `{}` is not an integer", parts[0]))
            })?,
            time: parse_cell(path, line_no, "time", parts[1])?,
            volume: parse_cell(path, line_no, "volume", parts[2])?,
            interface_pos: parse_opt_cell(path, line_no, "interface_pos", parts[3])?,
            interface_width: parse_opt_cell(path, line_no, "interface_width", parts[4])?,
            enthalpy: parse_opt_cell(path, line_no, "enthalpy", parts[5])?,
        });
    }
    Ok(records)
}
