//! JSON and text rendering of reports.
//!
//! All numbers are emitted as decimal strings. Object keys come out sorted,
//! so identical inputs give byte-identical output.

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::linalg::Int;

pub(crate) fn int<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn int_matrix<S: Serializer>(m: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        m.iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()),
    )
}

fn stringify(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    stringify(serde_json::to_value(x).expect("report types serialize"))
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Inline form for arrays of scalars and arrays of such arrays: `[1 -2 2]`, `[[1 0] [0 1]]`.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let Value::Array(items) = v else { return None };
    let parts: Option<Vec<String>> = items
        .iter()
        .map(|x| scalar(x).or_else(|| flat_array(x)))
        .collect();
    parts.map(|p| format!("[{}]", p.join(" ")))
}

fn flat_array(v: &Value) -> Option<String> {
    let Value::Array(items) = v else { return None };
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| format!("[{}]", p.join(" ")))
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- #{i}\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_become_strings() {
        let v = stringify(json!({"a": 3, "b": [1, [2, -4]], "c": true}));
        assert_eq!(v, json!({"a": "3", "b": ["1", ["2", "-4"]], "c": true}));
    }

    #[test]
    fn text_layout() {
        let v = json!({"g": [["1", "-2"], ["0", "1"]], "n": {"x": "1"}, "list": [{"k": "v"}]});
        assert_eq!(
            to_text(&v),
            "g: [[1 -2] [0 1]]\nlist:\n  - #0\n    k: v\nn:\n  x: 1\n"
        );
    }
}
