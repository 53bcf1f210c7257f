//! Plain-text rendering of a serialized report.
//!
//! Rationals print as `num/den`; arrays of records become aligned tables.

use serde_json::{Map, Value};

fn as_rational(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    if o.len() != 3 || !o.contains_key("decimal") {
        return None;
    }
    let (num, den) = (o.get("num")?, o.get("den")?);
    Some(if den.as_u64() == Some(1) {
        num.to_string()
    } else {
        format!("{num}/{den}")
    })
}

/// One-line rendering of any value.
pub fn compact(v: &Value) -> String {
    if let Some(r) = as_rational(v) {
        return r;
    }
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(compact).collect::<Vec<_>>().join(", ")),
        Value::Object(o) => format!(
            "{{{}}}",
            o.iter().map(|(k, v)| format!("{k}={}", compact(v))).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_record_list(v: &Value) -> Option<Vec<&Map<String, Value>>> {
    let items = v.as_array()?;
    if items.is_empty() {
        return None;
    }
    items
        .iter()
        .map(|i| i.as_object().filter(|_| as_rational(i).is_none()))
        .collect()
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Renders a report object: scalar fields as key/value rows, record lists as tables.
pub fn render(report: &Value) -> String {
    let Some(obj) = report.as_object() else {
        return format!("{}\n", compact(report));
    };
    let mut scalars = Vec::new();
    let mut sections = Vec::new();
    for (key, value) in obj {
        match is_record_list(value) {
            Some(records) => {
                let mut columns: Vec<&String> = Vec::new();
                for r in &records {
                    for k in r.keys() {
                        if !columns.contains(&k) {
                            columns.push(k);
                        }
                    }
                }
                let mut rows = vec![columns.iter().map(|c| c.to_string()).collect::<Vec<_>>()];
                for r in &records {
                    rows.push(columns.iter().map(|c| r.get(*c).map(compact).unwrap_or_else(|| "-".into())).collect());
                }
                sections.push(format!("{key}:\n{}", grid(&rows)));
            }
            None => scalars.push(vec![key.clone(), compact(value)]),
        }
    }
    let mut out = grid(&scalars);
    for s in sections {
        out.push('\n');
        out.push_str(&s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rationals_and_tables() {
        let r = json!({"num": -1, "den": 8, "decimal": "-0.125"});
        assert_eq!(compact(&r), "-1/8");
        let report = json!({
            "command": "walls mini",
            "walls": [{"m_squared": {"num": 5, "den": 4, "decimal": "1.25"}, "witnesses": []}],
        });
        let text = render(&report);
        assert!(text.starts_with("command  walls mini\n"));
        assert!(text.contains("m_squared  witnesses\n5/4        []\n"));
    }
}
