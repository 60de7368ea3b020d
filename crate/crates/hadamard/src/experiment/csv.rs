//! Minimal CSV emission with a fixed float format.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which is enough
//! to round-trip any f64, and formatting is a pure function of the bits, so
//! deterministic runs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// An in-memory table: one header row plus data rows of equal width.
pub(crate) struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub(crate) fn new<I, S>(header: I) -> Table
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            header: header.into_iter().map(|s| s.into()).collect(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub(crate) fn write(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub(crate) fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Unsigned integer cell.
pub(crate) fn u(x: usize) -> String {
    x.to_string()
}

/// Boolean as 0/1.
pub(crate) fn b(x: bool) -> String {
    if x { "1" } else { "0" }.to_string()
}
