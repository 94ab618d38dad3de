//! Number formatting and table layout.
//!
//! CSV and JSON carry 17 significant digits (`{:.16e}`), enough to recover
//! every `f64` exactly. Human tables use 6 decimals.

use copula_forge::properties::Witness;
use serde_json::{json, Map, Value};

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&sci(x)).expect("formatted float is valid JSON")
    } else {
        Value::Null
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

pub fn witness(w: &Option<Witness<f64>>) -> Value {
    match w {
        None => Value::Null,
        Some(w) => {
            let kind = match w {
                Witness::Point(..) => "point",
                Witness::Pair(..) => "pair",
                Witness::Triple(..) => "triple",
                Witness::Quad(..) => "quad",
            };
            json!({ "kind": kind, "coordinates": w.coordinates().into_iter().map(num).collect::<Vec<_>>() })
        }
    }
}

pub fn witness_text(w: &Option<Witness<f64>>) -> String {
    match w {
        None => "-".to_string(),
        Some(w) => {
            let parts: Vec<String> = w.coordinates().into_iter().map(fixed).collect();
            format!("({})", parts.join(", "))
        }
    }
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
