use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// How a command finished; ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Violation,
    PrecisionExhausted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::PrecisionExhausted => 3,
        }
    }

    pub fn from_holds(holds: bool) -> Status {
        if holds {
            Status::Ok
        } else {
            Status::Violation
        }
    }
}

/// The payload of one command in all three output formats.
pub struct Outcome {
    pub results: Value,
    pub csv: String,
    pub text: String,
    pub status: Status,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn new(results: Value, csv: String, text: String) -> Self {
        Outcome {
            results,
            csv,
            text,
            status: Status::Ok,
            warnings: Vec::new(),
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = self.status.max(status);
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

/// `{schema_version, command, results, warnings}`.
pub fn envelope(command: &str, args: &[String], outcome: &Outcome) -> String {
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": {"name": command, "args": args},
        "results": outcome.results,
        "warnings": outcome.warnings,
    });
    let mut out = serde_json::to_string_pretty(&report).expect("JSON values serialize");
    out.push('\n');
    out
}

/// Rows joined with commas after a header line.
pub fn csv<I, R>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(|c| quote(&c)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `value` without JSON quotes when it is a string, empty when null.
pub fn plain(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
