//! Shared report shape for criterion checks.

use std::fmt::Display;

use serde::{Serialize, Serializer};

/// Outcome of one criterion over a finite index range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub holds_on_range: bool,
    pub first_violation: Option<i64>,
    pub ledger: Vec<serde_json::Value>,
    pub summary: String,
}

impl CriterionReport {
    /// Builds a report whose verdict is derived from the first violation.
    pub fn new(criterion: &str, first_violation: Option<i64>, ledger: Vec<serde_json::Value>, summary: String) -> Self {
        CriterionReport {
            criterion: criterion.to_string(),
            holds_on_range: first_violation.is_none(),
            first_violation,
            ledger,
            summary,
        }
    }
}

pub(crate) fn as_string<T: Display, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn as_strings<T: Display, S: Serializer>(values: &[T], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_string()))
}

pub(crate) fn as_opt_string<T: Display, S: Serializer>(value: &Option<T>, serializer: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.collect_str(v),
        None => serializer.serialize_none(),
    }
}
