//! Report envelope shared by every subcommand.
//!
//! A report carries a schema tag, the subcommand name, a verdict, a JSON
//! payload, warnings, and the elapsed time. The text rendering reads only
//! the serialized fields, so parsing an emitted JSON report and rendering
//! it again reproduces the table exactly; the payload is deterministic for
//! a fixed input file and seed, while `timing_ms` is informational only.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "reedyqh-report/1";

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }

    pub fn from_passed(passed: bool) -> Verdict {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub verdict: Verdict,
    pub payload: Value,
    pub warnings: Vec<String>,
    pub timing_ms: u64,
}

/// Render the report as indented text with aligned tables.
pub fn render_human(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}: {}\n", r.command, r.verdict.label()));
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    render_value(&mut out, 1, None, &r.payload);
    out.push_str(&format!("elapsed: {} ms\n", r.timing_ms));
    out
}

fn is_scalar(v: &Value) -> bool {
    matches!(
        v,
        Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_)
    )
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => unreachable!("scalar_text on a container"),
    }
}

fn render_value(out: &mut String, indent: usize, key: Option<&str>, v: &Value) {
    let pad = "  ".repeat(indent);
    let head = |k: Option<&str>| k.map(|k| format!("{k}: ")).unwrap_or_default();
    if is_scalar(v) {
        out.push_str(&format!("{pad}{}{}\n", head(key), scalar_text(v)));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let cells: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{}[{}]\n", head(key), cells.join(" ")));
        }
        Value::Array(items)
            if items
                .iter()
                .all(|x| matches!(x, Value::Array(row) if row.iter().all(is_scalar))) =>
        {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            let grid: Vec<Vec<String>> = items
                .iter()
                .map(|row| match row {
                    Value::Array(cells) => cells.iter().map(scalar_text).collect(),
                    _ => unreachable!(),
                })
                .collect();
            let ncols = grid.iter().map(Vec::len).max().unwrap_or(0);
            let widths: Vec<usize> = (0..ncols)
                .map(|j| grid.iter().filter_map(|r| r.get(j)).map(String::len).max().unwrap_or(0))
                .collect();
            let inner = "  ".repeat(indent + usize::from(key.is_some()));
            for row in &grid {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(j, c)| format!("{c:>width$}", width = widths[j]))
                    .collect();
                out.push_str(&format!("{inner}{}\n", cells.join("  ")));
            }
        }
        Value::Array(items) => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            let next = indent + usize::from(key.is_some());
            for (i, item) in items.iter().enumerate() {
                render_value(out, next, Some(&format!("[{i}]")), item);
            }
        }
        Value::Object(map) => {
            let next = match key {
                Some(k) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    indent + 1
                }
                None => indent,
            };
            for (k, val) in map {
                render_value(out, next, Some(k), val);
            }
        }
        _ => unreachable!("scalars are handled above"),
    }
}
