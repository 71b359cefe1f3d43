//! Text serialization for run outputs: CSV with a `# key=value` config
//! header, and JSON documents carrying the same config.

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved run configuration, echoed at the top of every output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEcho {
    entries: BTreeMap<String, String>,
}

impl ConfigEcho {
    pub fn new(command: &str) -> Self {
        let mut echo = Self::default();
        echo.set("command", command);
        echo.set("version", VERSION);
        echo
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.set(key, num(value))
    }

    pub fn header_line(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {}", body.join(" "))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.entries.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect(),
        )
    }
}

/// 17 significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Builds a CSV document: config header, column header, then rows.
pub fn csv(echo: &ConfigEcho, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", echo.header_line());
    let _ = writeln!(out, "{}", columns.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parses comment-aware CSV rows of numbers, skipping `#` lines and a
/// non-numeric header line.
pub fn parse_numeric_csv(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match fields.iter().map(|f| f.parse::<f64>()).collect::<Result<Vec<_>, _>>() {
            Ok(v) => rows.push(v),
            Err(_) if rows.is_empty() => continue,
            Err(e) => return Err(format!("line {}: {e}", lineno + 1)),
        }
    }
    Ok(rows)
}
