//! Self-describing output artifacts and their structural diff.
//!
//! Every artifact is a JSON document `{kind, meta, data}`. Coefficient tables
//! inside `data` are keyed by subgroup labels (canonical generator lists),
//! never by enumeration indices, and every rational is a `{num, den}` pair,
//! so golden files survive internal reordering and carry no float drift.

use std::path::Path;

use burnside::Rat;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::Failure;

#[derive(Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub kind: String,
    pub meta: Meta,
    pub data: Value,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tethered: Option<bool>,
}

impl Meta {
    pub fn new() -> Meta {
        Meta {
            tool: "burnside".to_string(),
            ..Meta::default()
        }
    }
}

/// `{num, den}` encoding of an exact rational.
pub fn rat_value(r: Rat) -> Value {
    json!({ "num": *r.numer(), "den": *r.denom() })
}

/// A vector keyed by class labels, in the given label order.
pub fn labeled_vector<T: Into<Value>>(labels: &[String], values: Vec<T>) -> Value {
    assert_eq!(labels.len(), values.len());
    let mut map = Map::new();
    for (label, v) in labels.iter().zip(values) {
        map.insert(label.clone(), v.into());
    }
    Value::Object(map)
}

/// A square table keyed by row label then column label.
pub fn labeled_table(
    row_labels: &[String],
    col_labels: &[String],
    mut entry: impl FnMut(usize, usize) -> Value,
) -> Value {
    let mut rows = Map::new();
    for (i, row) in row_labels.iter().enumerate() {
        let mut cols = Map::new();
        for (j, col) in col_labels.iter().enumerate() {
            cols.insert(col.clone(), entry(i, j));
        }
        rows.insert(row.clone(), Value::Object(cols));
    }
    Value::Object(rows)
}

/// Serialize with a stable layout; two runs over the same input are
/// byte-identical.
pub fn to_json(artifact: &Artifact) -> String {
    let mut s = serde_json::to_string_pretty(artifact).expect("artifact serializes");
    s.push('\n');
    s
}

pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_artifact(path: &Path) -> Result<Artifact, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("cannot parse artifact {}: {e}", path.display())))
}

/// One structural difference between two artifacts.
#[derive(Debug, Serialize)]
pub struct Difference {
    pub path: String,
    pub left: Value,
    pub right: Value,
}

/// True for a `{num, den}` rational leaf.
fn is_rational(v: &Value) -> bool {
    matches!(v, Value::Object(m)
        if m.len() == 2 && m.get("num").is_some_and(Value::is_i64)
            && m.get("den").is_some_and(Value::is_i64))
}

/// Render a value for a diff report; rationals print as `n` or `n/d`.
pub fn pretty(v: &Value) -> String {
    if is_rational(v) {
        let num = v["num"].as_i64().expect("checked");
        let den = v["den"].as_i64().expect("checked");
        if den == 1 {
            return num.to_string();
        }
        return format!("{num}/{den}");
    }
    v.to_string()
}

/// Walk two data trees and report every leaf where they disagree. Paths are
/// built from object keys (class labels) and list positions; `{num, den}`
/// rationals are compared atomically.
pub fn diff_values(path: &str, a: &Value, b: &Value, out: &mut Vec<Difference>) {
    match (a, b) {
        _ if is_rational(a) || is_rational(b) => {
            if a != b {
                out.push(Difference {
                    path: path.to_string(),
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
        (Value::Object(ma), Value::Object(mb)) => {
            let keys: std::collections::BTreeSet<&String> =
                ma.keys().chain(mb.keys()).collect();
            for key in keys {
                let sub = format!("{path}/{key}");
                match (ma.get(key), mb.get(key)) {
                    (Some(x), Some(y)) => diff_values(&sub, x, y, out),
                    (Some(x), None) => out.push(Difference {
                        path: sub,
                        left: x.clone(),
                        right: Value::Null,
                    }),
                    (None, Some(y)) => out.push(Difference {
                        path: sub,
                        left: Value::Null,
                        right: y.clone(),
                    }),
                    (None, None) => unreachable!(),
                }
            }
        }
        (Value::Array(xs), Value::Array(ys)) if xs.len() == ys.len() => {
            for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                diff_values(&format!("{path}/{i}"), x, y, out);
            }
        }
        _ if a == b => {}
        _ => out.push(Difference {
            path: path.to_string(),
            left: a.clone(),
            right: b.clone(),
        }),
    }
}
