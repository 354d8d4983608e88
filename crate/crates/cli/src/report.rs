//! Report emission as JSON (sorted keys) or CSV.

use crate::Format;
use currentlab::error::{Error, Result};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

pub fn emit(report: &Value, format: Format, output: Option<&Path>) -> Result<()> {
    let text = match format {
        Format::Json => currentlab::io::to_json_string(report)?,
        Format::Csv => to_csv(report)?,
    };
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::Io),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// The first array of objects found under a known table key becomes the
/// table; otherwise the scalar fields are written as key,value rows.
fn to_csv(report: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Argument(format!("csv: {e}"));
    let table = ["rows", "levels_table", "nodes_table", "centers"]
        .iter()
        .find_map(|k| report.get(*k).and_then(Value::as_array).filter(|a| a.iter().all(Value::is_object) && !a.is_empty()));
    match table {
        Some(rows) => {
            let header: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
            w.write_record(&header).map_err(csv_err)?;
            for r in rows {
                let rec: Vec<String> = header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect();
                w.write_record(&rec).map_err(csv_err)?;
            }
        }
        None => {
            w.write_record(["key", "value"]).map_err(csv_err)?;
            let mut flat = Vec::new();
            flatten("", report, &mut flat);
            for (k, v) in flat {
                w.write_record([k, v]).map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Argument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                // chains and certificates do not fit a flat table
                if k == "chain" || k == "certificate" {
                    continue;
                }
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), a.iter().map(cell).collect::<Vec<_>>().join(";")));
        }
        Value::Array(_) => {}
        other => out.push((prefix.to_string(), cell(other))),
    }
}
