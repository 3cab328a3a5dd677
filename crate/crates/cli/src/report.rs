use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::{CliError, Format, RunConfig};

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRow {
    pub trial: Option<usize>,
    pub margin: f64,
    pub artifact: Option<String>,
    pub dim: Option<u64>,
    pub side: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<String>,
}

/// The on-disk report. Only `started_unix_seconds` varies between runs of
/// the same configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub config_echo: RunConfig,
    pub check_name: String,
    pub started_unix_seconds: u64,
    pub results: Vec<Map<String, Value>>,
    pub violations: Vec<ViolationRow>,
    pub summary: Map<String, Value>,
    /// CSV header; JSON rows carry the same keys.
    #[serde(skip)]
    pub columns: Vec<String>,
}

impl Report {
    pub fn new(cfg: &RunConfig, check_name: &str, columns: &[&str]) -> Self {
        let started = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            config_echo: cfg.clone(),
            check_name: check_name.to_string(),
            started_unix_seconds: started,
            results: Vec::new(),
            violations: Vec::new(),
            summary: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn push_row(&mut self, values: Vec<Value>) {
        assert_eq!(values.len(), self.columns.len(), "row width");
        self.results
            .push(self.columns.iter().cloned().zip(values).collect());
    }

    /// Sets the three fixed summary keys; extra keys follow them.
    pub fn set_summary(&mut self, trials: usize, min_margin: Option<f64>, verdict: &str) {
        let mut s = Map::new();
        s.insert("trials".into(), trials.into());
        s.insert("min_margin".into(), num(min_margin));
        s.insert("verdict".into(), verdict.into());
        s.extend(std::mem::take(&mut self.summary));
        self.summary = s;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.results {
            w.write_record(self.columns.iter().map(|c| cell(&row[c]))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Writes to `--out` or stdout in the configured format.
    pub fn write(&self, cfg: &RunConfig) -> Result<(), CliError> {
        let text = match cfg.format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv()?,
        };
        match &cfg.out_path {
            Some(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(parent)?;
                }
                fs::write(p, text)?;
            }
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Finite numbers as JSON numbers; `None` and non-finite values as `null`.
pub fn num(x: Option<f64>) -> Value {
    x.filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}
