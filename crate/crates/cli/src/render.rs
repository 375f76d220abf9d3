//! Plain-text rendering of operation output.

use serde_json::Value;

use crate::json::ems_from_value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> String {
    if let Some(s) = scalar(v) {
        return s;
    }
    if let Ok(e) = ems_from_value(v) {
        return e.to_string();
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        _ => serde_json::to_string(v).expect("values serialize"),
    }
}

/// `key: value` lines; lists of objects get one indented line per item and
/// multi-line strings are indented under their key.
pub fn render_text(v: &Value) -> String {
    let Value::Object(m) = v else {
        return format!("{}\n", inline(v));
    };
    let mut out = String::new();
    for (k, val) in m {
        match val {
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{k}:\n"));
                for line in s.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            Value::Array(items) if !items.is_empty() && items.iter().any(|x| scalar(x).is_none()) => {
                out.push_str(&format!("{k}:\n"));
                for x in items {
                    out.push_str(&format!("  - {}\n", inline(x)));
                }
            }
            _ => out.push_str(&format!("{k}: {}\n", inline(val))),
        }
    }
    out
}
