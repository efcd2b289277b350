//! The canonical text form: two-space indentation, arrays of scalars on one
//! line, keys in insertion order, trailing newline.

use serde::Serialize;
use serde_json::Value;

pub fn to_canonical(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn render<T: Serialize>(t: &T) -> String {
    to_canonical(&serde_json::to_value(t).expect("plain data serializes"))
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn pad(n: usize, out: &mut String) {
    out.extend(std::iter::repeat_n(' ', n));
}

fn write(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(indent + 2, out);
                write(x, indent + 2, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(indent + 2, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write(x, indent + 2, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn layout() {
        let v = json!({"order": 2, "mult": [[0, 1], [1, 0]], "name": "C2", "e": [], "o": {}});
        assert_eq!(
            to_canonical(&v),
            "{\n  \"order\": 2,\n  \"mult\": [\n    [0, 1],\n    [1, 0]\n  ],\n  \"name\": \"C2\",\n  \"e\": [],\n  \"o\": {}\n}\n"
        );
    }

    #[test]
    fn reparses_to_the_same_value() {
        let v = json!({"a": [{"b": [1, 2]}, [3, [4]]], "s": "q\"uote"});
        assert_eq!(serde_json::from_str::<Value>(&to_canonical(&v)).unwrap(), v);
    }
}
