//! CSV and report files. Floats use `{}` formatting, which round-trips and is deterministic.

use std::path::Path;

use crate::report::RunReport;
use crate::CliError;

pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush().map_err(|e| CliError::Io(path.display().to_string(), e))
    }
}

/// Formats a row of displayable cells.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(format!("{}", $x)),*] };
}

pub const RECORD_HEADER: &[&str] = &["name", "provenance", "comparison", "expected", "observed", "pass"];

pub fn write_report(r: &RunReport, out: &Path) -> Result<(), CliError> {
    let stem = r.command.replace('-', "_");
    let path = out.join(format!("{stem}_report.toml"));
    std::fs::write(&path, r.to_toml()).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut t = Table::new(RECORD_HEADER);
    for rec in &r.records {
        t.push(crate::row![rec.name, rec.provenance.as_str(), rec.comparison.describe(), rec.expected, rec.observed, rec.pass]);
    }
    t.write(&out.join(format!("{stem}_records.csv")))
}
