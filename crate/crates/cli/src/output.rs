use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// One CSV file and its JSON sidecar.
#[derive(Debug, Clone)]
pub struct Table {
    pub stem: String,
    pub csv: Vec<u8>,
    pub sidecar: Value,
}

impl Table {
    /// `csv_rows` go to the CSV body; `json_rows` with their runtimes go to
    /// the sidecar, so the CSV stays identical across reruns.
    pub fn new<C: Serialize, J: Serialize>(stem: &str, csv_rows: &[C], json_rows: &[J], runtimes: &[f64]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in csv_rows {
            w.serialize(row)?;
        }
        let csv = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
        let rows: Vec<Value> = json_rows
            .iter()
            .zip(runtimes)
            .map(|(r, &t)| Ok(json!({ "record": serde_json::to_value(r)?, "runtime_seconds": t })))
            .collect::<Result<_, serde_json::Error>>()?;
        Ok(Self { stem: stem.to_string(), csv, sidecar: json!({ "rows": rows }) })
    }
}

/// Writes `<stem>.csv` and `<stem>.json` for every table. `meta` is merged
/// into each sidecar.
pub fn write_tables(dir: &Path, tables: &[Table], meta: &Value) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Output { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let written = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    for t in tables {
        let csv_path = dir.join(format!("{}.csv", t.stem));
        fs::write(&csv_path, &t.csv).map_err(io(&csv_path))?;
        let mut sidecar = t.sidecar.clone();
        if let (Some(obj), Some(extra)) = (sidecar.as_object_mut(), meta.as_object()) {
            for (k, v) in extra {
                obj.insert(k.clone(), v.clone());
            }
            obj.insert("written_unix_seconds".into(), json!(written));
        }
        let json_path = dir.join(format!("{}.json", t.stem));
        fs::write(&json_path, serde_json::to_vec_pretty(&sidecar)?).map_err(io(&json_path))?;
    }
    Ok(())
}
