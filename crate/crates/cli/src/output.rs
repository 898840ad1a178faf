//! CSV and JSON emission. CSV floats use `{:.16e}` (17 significant digits),
//! `NaN`, `inf` and `-inf`; lines end in `\n`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (csv|json)")),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    E,
    Two,
}

impl std::str::FromStr for LogBase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            _ => Err(format!("unknown log base {s:?} (e|2)")),
        }
    }
}

impl LogBase {
    /// Converts a natural-log quantity to this base.
    pub fn convert(self, ln_value: f64) -> f64 {
        match self {
            LogBase::E => ln_value,
            LogBase::Two => ln_value / std::f64::consts::LN_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// A rectangular numeric table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// `{"columns": [...], "metadata": {...}, "rows": [[...], ...]}`; non-finite
    /// values become `null`.
    pub fn to_json(&self, metadata: Value) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(|x| json_f64(*x)).collect())).collect();
        let v = serde_json::json!({ "columns": self.columns, "metadata": metadata, "rows": rows });
        to_json_string(&v)
    }

    /// CSV carries the metadata as `# key=value` footer lines, keys sorted.
    pub fn render(&self, format: Format, metadata: Value) -> String {
        match format {
            Format::Csv => {
                let mut s = self.to_csv();
                if let Value::Object(m) = &metadata {
                    let entries: Vec<(&str, String)> = m
                        .iter()
                        .map(|(k, v)| (k.as_str(), v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                        .collect();
                    csv_footer(&mut s, &entries);
                }
                s
            }
            Format::Json => self.to_json(metadata),
        }
    }
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Pretty JSON with a trailing newline. Object keys come out sorted.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Appends `# key=value` footer lines to a CSV body.
pub fn csv_footer(body: &mut String, entries: &[(&str, String)]) {
    for (k, v) in entries {
        let _ = writeln!(body, "# {k}={v}");
    }
}

/// Where a rendered document goes.
#[derive(Clone, Debug, PartialEq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    /// `-` means stdout.
    pub fn in_dir(dir: &Path, name: &str) -> Sink {
        if dir.as_os_str() == "-" { Sink::Stdout } else { Sink::File(dir.join(name)) }
    }

    pub fn write(&self, text: &str) -> Result<(), CliError> {
        match self {
            Sink::Stdout => {
                print!("{text}");
                Ok(())
            }
            Sink::File(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
                }
                std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                eprintln!("wrote {}", p.display());
                Ok(())
            }
        }
    }
}
