//! CSV helpers shared by the commands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{BenchError, Result};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Seventeen significant digits in scientific notation.
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| BenchError::Io { path: path.to_owned(), source })
}

/// Runs `f` against a buffered file writer and maps errors to the path.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> csv::Result<()>,
{
    let mut w = create(path)?;
    f(&mut w).map_err(|source| BenchError::Csv { path: path.to_owned(), source })?;
    w.flush().map_err(|source| BenchError::Io { path: path.to_owned(), source })
}

/// Missing-value markers accepted in input data.
pub fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c.eq_ignore_ascii_case("na") || c.eq_ignore_ascii_case("nan")
}
