//! CSV reading and writing. Numbers are written with Rust's shortest
//! round-trip formatting, so a value written and read back is bit-identical.

use std::fs::File;
use std::path::Path;

use crate::error::{at_path, CliError, CliResult};

/// Columnar view of a CSV file with a header row. Empty cells are `None`.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let file = at_path(File::open(path), path)?;
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let headers: Vec<String> = at_path(rdr.headers(), path)?.iter().map(str::to_owned).collect();
        if headers.is_empty() {
            return Err(CliError::data(format!("{}: missing header row", path.display())));
        }
        let mut columns = vec![Vec::new(); headers.len()];
        for (row, rec) in rdr.records().enumerate() {
            let rec = at_path(rec, path)?;
            for (c, cell) in rec.iter().enumerate() {
                let v = if cell.is_empty() {
                    None
                } else {
                    let v: f64 = cell.parse().map_err(|_| {
                        CliError::data(format!(
                            "{}: row {}, column '{}': '{cell}' is not a number",
                            path.display(),
                            row + 2,
                            headers[c]
                        ))
                    })?;
                    if !v.is_finite() {
                        return Err(CliError::data(format!(
                            "{}: row {}, column '{}': non-finite value",
                            path.display(),
                            row + 2,
                            headers[c]
                        )));
                    }
                    Some(v)
                };
                columns[c].push(v);
            }
        }
        Ok(Self { headers, columns })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Column without gaps.
    pub fn dense(&self, c: usize) -> CliResult<Vec<f64>> {
        self.columns[c]
            .iter()
            .enumerate()
            .map(|(r, v)| {
                v.ok_or_else(|| {
                    CliError::data(format!(
                        "column '{}' has an empty cell at row {}",
                        self.headers[c],
                        r + 2
                    ))
                })
            })
            .collect()
    }

    /// Whether the first column is a `t` index rather than data.
    pub fn has_time_column(&self) -> bool {
        self.headers[0].eq_ignore_ascii_case("t")
    }

    /// Indices of data columns: everything but a leading `t` and a
    /// `p_true` truth column.
    pub fn data_columns(&self) -> Vec<usize> {
        let skip = usize::from(self.has_time_column());
        (skip..self.headers.len())
            .filter(|&c| self.headers[c] != "p_true")
            .collect()
    }
}

pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Write `header` and `rows` as CSV with `\n` line endings.
pub fn write_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let file = at_path(File::create(path), path)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    at_path(w.write_record(header), path)?;
    for row in rows {
        at_path(w.write_record(&row), path)?;
    }
    at_path(w.flush(), path)?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    at_path(std::fs::write(path, text), path)
}
