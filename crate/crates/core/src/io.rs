//! Matrix files: CSV (one row per line, `#` comments) or JSON
//! `{"rows": r, "cols": c, "data": [row-major entries]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    /// `.json` means JSON; anything else is read as CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

fn parse_csv(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Io(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::Io(format!(
                    "line {line}: expected {c} columns, found {} (ragged rows)",
                    record.len()
                )))
            }
            Some(_) => {}
        }
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field
                .parse()
                .map_err(|_| Error::Io(format!("line {line}, column {}: '{field}' is not a number", j + 1)))?;
            if !value.is_finite() {
                return Err(Error::Io(format!("line {line}, column {}: non-finite entry '{field}'", j + 1)));
            }
            data.push(value);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::Io("no matrix rows found".into()))?;
    Ok(Matrix::from_row_slice(rows, cols, &data))
}

fn parse_json(text: &str) -> Result<Matrix> {
    let m: JsonMatrix = serde_json::from_str(text)
        .map_err(|e| Error::Io(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if m.rows.checked_mul(m.cols) != Some(m.data.len()) {
        return Err(Error::Io(format!(
            "declared {}x{} but data holds {} entries",
            m.rows,
            m.cols,
            m.data.len()
        )));
    }
    // serde_json rejects NaN/Inf literals, so entries are finite here
    Ok(Matrix::from_row_slice(m.rows, m.cols, &m.data))
}

pub fn parse_matrix_str(text: &str, format: MatrixFormat) -> Result<Matrix> {
    match format {
        MatrixFormat::Csv => parse_csv(text),
        MatrixFormat::Json => parse_json(text),
    }
}

pub fn parse_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text, MatrixFormat::from_path(path)).map_err(|e| match e {
        Error::Io(msg) => Error::Io(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// 17 significant digits, enough to round-trip any `f64`.
fn format_entry(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_matrix(x: &Matrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Csv => {
            let mut out = String::new();
            for row in x.row_iter() {
                let line: Vec<String> = row.iter().map(|&v| format_entry(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        MatrixFormat::Json => {
            let m = JsonMatrix {
                rows: x.nrows(),
                cols: x.ncols(),
                data: x.transpose().iter().copied().collect(),
            };
            let mut s = serde_json::to_string(&m).expect("finite matrix serializes");
            s.push('\n');
            s
        }
    }
}

pub fn write_matrix(path: &Path, x: &Matrix) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Io(format!("{}: refusing to write non-finite entries", path.display())));
    }
    fs::write(path, format_matrix(x, MatrixFormat::from_path(path)))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
