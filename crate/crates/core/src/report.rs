//! Canonical JSON: sorted keys, floats with 17 significant digits, one
//! trailing newline. Byte-identical for identical inputs.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "tiling-lab/1";

/// Writes `v` canonically (no trailing newline).
pub fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => {
            if num.is_f64() {
                let x = num.as_f64().expect("f64 number");
                write!(out, "{x:.16e}").unwrap();
            } else {
                write!(out, "{num}").unwrap();
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serialises")),
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serialises"));
                out.push(':');
                write_canonical(&m[k], out);
            }
            out.push('}');
        }
    }
}

/// Canonical text of any serialisable value, newline-terminated.
pub fn canonical_string<T: Serialize + ?Sized>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_canonical(&v, &mut out);
    out.push('\n');
    Ok(out)
}

/// `{"schema": "tiling-lab/1", "command": .., "result": ..}` in canonical form.
pub fn envelope<T: Serialize + ?Sized>(command: &str, result: &T) -> Result<String, serde_json::Error> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("result".into(), serde_json::to_value(result)?);
    canonical_string(&Value::Object(m))
}
