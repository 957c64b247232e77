//! Signal input and CSV output.

use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Reads a signal from a text file.
///
/// Fields are separated by commas and/or whitespace. Lines starting with `#`
/// and blank lines are skipped. A first data line whose selected field is
/// not a number is taken as a header. With several columns, `column` picks
/// one (zero-based); without it the file must have a single column.
pub fn read_signal(path: &Path, column: Option<usize>) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut samples = Vec::new();
    let mut seen_row = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let index = match column {
            Some(k) => k,
            None if fields.len() == 1 => 0,
            None => {
                return Err(CliError::Input(format!(
                    "{}:{}: {} columns found; choose one with --column",
                    path.display(),
                    lineno + 1,
                    fields.len()
                )))
            }
        };
        let field = fields.get(index).ok_or_else(|| {
            CliError::Input(format!(
                "{}:{}: no column {index} (line has {})",
                path.display(),
                lineno + 1,
                fields.len()
            ))
        })?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => samples.push(v),
            Ok(_) => {
                return Err(CliError::Input(format!(
                    "{}:{}: non-finite sample {field}",
                    path.display(),
                    lineno + 1
                )))
            }
            Err(_) if !seen_row => {}
            Err(_) => {
                return Err(CliError::Input(format!(
                    "{}:{}: not a number: {field}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
        seen_row = true;
    }
    if samples.is_empty() {
        return Err(CliError::Input(format!("{}: no samples", path.display())));
    }
    Ok(samples)
}

/// Writes named columns of equal length, one row per sample.
pub fn write_columns(path: &Path, names: &[String], columns: &[&[f64]]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    w.write_record(names).map_err(|e| CliError::io(path, e))?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| fmt_num(c[i])))
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a file written by [`write_columns`].
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let names: Vec<String> = r
        .headers()
        .map_err(|e| CliError::io(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut columns = vec![Vec::new(); names.len()];
    for record in r.records() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(
                field
                    .parse()
                    .map_err(|e| CliError::io(path, format!("{field}: {e}")))?,
            );
        }
    }
    Ok((names, columns))
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}
