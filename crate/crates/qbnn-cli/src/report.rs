//! Result emission: pretty JSON, versioned CSV tables, and check printing.
//!
//! JSON carries the whole report; CSV carries the report's main data table
//! behind a `# qbnn-csv <version> <kind>` comment line. Both directions are
//! exposed so files round-trip to identical values in tests.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::experiments::{
    AppendixReport, CallCountReport, Check, ConjectureReport, Fig5Report, GroverReport,
    FORMAT_VERSION,
};

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).context("encoding JSON report")?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).context("parsing JSON report")
}

/// Version comment, header row, then one record per table row.
pub fn rows_to_csv<T: Serialize>(kind: &str, rows: &[T]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).context("encoding CSV row")?;
    }
    let body =
        String::from_utf8(writer.into_inner().context("flushing CSV")?).context("CSV is UTF-8")?;
    Ok(format!("# qbnn-csv {FORMAT_VERSION} {kind}\n{body}"))
}

pub fn rows_from_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .context("parsing CSV rows")
}

/// The version stamp of a CSV payload, e.g. `qbnn-csv v1 grover`.
pub fn csv_version_line(text: &str) -> Option<&str> {
    text.strip_prefix("# ").and_then(|rest| rest.lines().next())
}

pub fn fig5_csv(report: &Fig5Report) -> Result<String> {
    rows_to_csv("reproduce-fig5", &report.distribution)
}

pub fn appendix_csv(report: &AppendixReport) -> Result<String> {
    rows_to_csv("reproduce-appendix", &report.sweep)
}

pub fn grover_csv(report: &GroverReport) -> Result<String> {
    rows_to_csv("grover", &report.rows)
}

pub fn conjecture_csv(report: &ConjectureReport) -> Result<String> {
    rows_to_csv("conjecture", &report.rows)
}

pub fn callcount_csv(report: &CallCountReport) -> Result<String> {
    rows_to_csv("callcount", &report.rows)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Prints one line per check to stderr; true iff everything passed.
pub fn print_checks(checks: &[Check]) -> bool {
    let mut all_passed = true;
    for check in checks {
        let tag = if check.passed { "PASS" } else { "FAIL" };
        eprintln!("[{}] {}: {}", tag, check.name, check.detail);
        all_passed &= check.passed;
    }
    all_passed
}
