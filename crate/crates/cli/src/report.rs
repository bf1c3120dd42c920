//! Report assembly and rendering.

use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL: &str = "engelhaar";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub label: String,
    pub reason: String,
}

/// Run metadata that may differ between otherwise identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub catalog: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    /// One object per group or tower, sorted by label; each carries a `label` key.
    pub results: Vec<Value>,
    pub skipped: Vec<Skipped>,
    /// Counterexamples to a checked law.
    pub findings: usize,
    pub timing: Timing,
}

impl Report {
    /// Exit status for a completed run: findings take precedence over success.
    pub fn exit_code(&self) -> i32 {
        if self.findings > 0 {
            crate::EXIT_FINDING
        } else {
            crate::EXIT_OK
        }
    }

    /// Everything except `timing`; byte-stable across runs and worker counts.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing");
        v
    }

    pub fn payload_string(&self) -> String {
        serde_json::to_string(&self.payload()).expect("payload serializes")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per result and per skipped entry. Nested values are written as
    /// compact JSON; columns after `label,status,reason` are sorted by key.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut keys: Vec<&str> = self
            .results
            .iter()
            .filter_map(Value::as_object)
            .flat_map(|m| m.keys().map(String::as_str))
            .filter(|&k| k != "label")
            .collect();
        keys.sort_unstable();
        keys.dedup();

        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label", "status", "reason"];
        header.extend(&keys);
        w.write_record(&header)?;
        for r in &self.results {
            let label = r.get("label").map(cell).unwrap_or_default();
            let mut row = vec![label, "ok".to_string(), String::new()];
            row.extend(keys.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()));
            w.write_record(&row)?;
        }
        for s in &self.skipped {
            let mut row = vec![s.label.clone(), "skipped".to_string(), s.reason.clone()];
            row.extend(keys.iter().map(|_| String::new()));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
