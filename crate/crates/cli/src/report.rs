//! The JSON report envelope and the stderr table derived from it.

use serde::Serialize;
use serde_json::{Map, Value};

use nmds_core::gf::FieldDescriptor;
use nmds_core::Elem;

/// Provenance echoed in every report: the parsed flags, the field, the tool
/// version and the budget spent.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Run {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<[Elem; 5]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub force: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_scan: Option<bool>,
    pub workers: Option<usize>,
    pub budget: u64,
    pub budget_spent: u64,
}

impl Run {
    pub fn new(command: &'static str, budget: u64, workers: Option<usize>) -> Self {
        Run {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            field: None,
            curve: None,
            matrix: None,
            point: None,
            k: None,
            h: None,
            n: None,
            filter: None,
            seed: None,
            sample: None,
            force: None,
            full_scan: None,
            workers,
            budget,
            budget_spent: 0,
        }
    }
}

/// A command result with its run object under the key `run`.
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(run: Run, result: Value) -> Self {
        let mut map = match result {
            Value::Object(map) => map,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        map.insert(
            "run".into(),
            serde_json::to_value(run).expect("run serializes"),
        );
        Report(map)
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.0).expect("report serializes");
        text.push('\n');
        text
    }

    /// Two-column table of the report, `run` last, nested objects flattened to
    /// dotted keys and long arrays summarized by their length.
    pub fn table(&self) -> String {
        let mut rows = Vec::new();
        for (key, value) in self.0.iter().filter(|(k, _)| *k != "run") {
            flatten(key, value, &mut rows);
        }
        if let Some(run) = self.0.get("run") {
            flatten("run", run, &mut rows);
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

const INLINE_ARRAY: usize = 8;

fn flatten(key: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(&format!("{key}.{k}"), v, rows);
            }
        }
        Value::Array(items) if items.len() > INLINE_ARRAY => {
            rows.push((key.to_string(), format!("[{} entries]", items.len())));
        }
        Value::String(s) => rows.push((key.to_string(), s.clone())),
        other => rows.push((key.to_string(), other.to_string())),
    }
}
