//! Plain-text rendering of the command outputs.

use serde_json::Value;

fn fmt_scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => format!("{n}"),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn fmt_matrix(v: &Value) -> String {
    let Some(rows) = v.as_array() else {
        return v.to_string();
    };
    let mut out = String::new();
    for row in rows {
        out.push_str("  [");
        if let Some(cols) = row.as_array() {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| {
                    if let Some(pair) = c.as_array() {
                        let re = pair[0].as_f64().unwrap_or(f64::NAN);
                        let im = pair[1].as_f64().unwrap_or(f64::NAN);
                        if im == 0.0 {
                            format!("{re:.6}")
                        } else {
                            format!("{re:.6}{im:+.6}i")
                        }
                    } else {
                        fmt_scalar(c)
                    }
                })
                .collect();
            out.push_str(&cells.join(", "));
        }
        out.push_str("]\n");
    }
    out
}

pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Some(obj) = v.as_object() else {
        return format!("{v}\n");
    };
    if let Some(cmd) = obj.get("command").and_then(Value::as_str) {
        out.push_str(&format!("== {cmd} ==\n"));
    }
    if let Some(checks) = obj.get("checks").and_then(Value::as_array) {
        for check in checks {
            let name = check.get("name").and_then(Value::as_str).unwrap_or("?");
            let status = check.get("status").and_then(Value::as_str).unwrap_or("?");
            let detail = check.get("detail").and_then(Value::as_str).unwrap_or("");
            if detail.is_empty() {
                out.push_str(&format!("{status}  {name}\n"));
            } else {
                out.push_str(&format!("{status}  {name}  ({detail})\n"));
            }
        }
    }
    if let Some(errata) = obj.get("expected_discrepancies").and_then(Value::as_array) {
        for e in errata {
            out.push_str(&format!(
                "EXPECTED DISCREPANCY  {}\n",
                e.as_str().unwrap_or("?")
            ));
        }
    }
    for (key, value) in obj {
        if matches!(
            key.as_str(),
            "command" | "checks" | "expected_discrepancies"
        ) {
            continue;
        }
        if key == "profile" {
            let n = value.as_array().map_or(0, Vec::len);
            out.push_str(&format!("profile: {n} samples (see JSON output)\n"));
            continue;
        }
        match value {
            Value::Array(rows)
                if rows.first().map(|r| r.is_array()).unwrap_or(false)
                    && matches!(
                        key.as_str(),
                        "L" | "hhat" | "best_hhat" | "gain" | "residual"
                    ) =>
            {
                out.push_str(&format!("{key}:\n{}", fmt_matrix(value)));
            }
            Value::Object(_) => {
                out.push_str(&format!("{key}: {value}\n"));
            }
            other => out.push_str(&format!("{key}: {}\n", fmt_scalar(other))),
        }
    }
    out
}
