//! JSON and CSV encodings of result records.
//!
//! CSV output is one header row and one data row. Nested objects are
//! flattened with dotted keys; arrays of scalars are joined with spaces and
//! any other array is embedded as JSON text. Numbers are written exactly as
//! in the JSON encoding, so both carry identical values.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::CliError;

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), cells.join(" ")));
        }
        Value::Array(_) => out.push((prefix.to_string(), v.to_string())),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit<T: Serialize>(record: &T, format: Format) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let io = |e: std::io::Error| CliError::Internal(format!("writing output: {e}"));
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut lock, record)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            writeln!(lock).map_err(io)?;
        }
        Format::Csv => {
            let value =
                serde_json::to_value(record).map_err(|e| CliError::Internal(e.to_string()))?;
            let mut cells = Vec::new();
            flatten("", &value, &mut cells);
            let mut w = csv::Writer::from_writer(lock);
            let csv_err = |e: csv::Error| CliError::Internal(format!("writing output: {e}"));
            w.write_record(cells.iter().map(|(k, _)| k))
                .map_err(csv_err)?;
            w.write_record(cells.iter().map(|(_, v)| v))
                .map_err(csv_err)?;
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}
