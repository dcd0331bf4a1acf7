use std::path::Path;

use serde::Serialize;

use crate::CliError;

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        source,
    }
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e.into()))?;
    w.write_record(header).map_err(|e| io_err(path, e.into()))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e.into()))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}
