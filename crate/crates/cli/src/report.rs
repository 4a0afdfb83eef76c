use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope for every command's machine-readable output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, outputs: Value, timing_ms: u64) -> Self {
        Report { schema_version: SCHEMA_VERSION.to_string(), command: command.to_string(), inputs, outputs, timing_ms }
    }

    /// Pretty JSON with every object's keys sorted.
    pub fn to_json(&self) -> String {
        // serde_json's default map is a BTreeMap, so going through Value sorts keys
        let value = serde_json::to_value(self).expect("report is always serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is always serializable");
        s.push('\n');
        s
    }
}
