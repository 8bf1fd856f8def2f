//! Experiment reports: per-row CSV and a `key = value` summary document.

use std::io::Write;
use std::path::Path;

use displace_core::kv::KvDoc;

use crate::CliError;

pub const TOOL: &str = "displace";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Report,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Rows, summary, and named checks for one run. Wall-clock time is kept out
/// of the rendered output unless explicitly attached, so re-runs are
/// byte-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub wall_clock_seconds: Option<f64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: Vec<(String, String)>, columns: &[&str]) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.to_string(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            checks: Vec::new(),
            wall_clock_seconds: None,
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl ToString) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.to_string() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    /// The summary document: provenance, config echo, summary, checks.
    pub fn to_kv(&self) -> KvDoc {
        let mut kv = KvDoc::new("experiment_report");
        kv.push("tool", TOOL);
        kv.push("version", VERSION);
        kv.push("experiment", &self.experiment);
        for (k, v) in &self.config {
            kv.push(&format!("config.{k}"), v);
        }
        if let Some(t) = self.wall_clock_seconds {
            kv.push("wall_clock_seconds", format!("{t:.3}"));
        }
        kv.push("rows", self.rows.len());
        for (k, v) in &self.summary {
            kv.push(&format!("summary.{k}"), v);
        }
        for c in &self.checks {
            kv.push(&format!("check.{}", c.name), if c.passed { "pass" } else { "fail" });
            if !c.detail.is_empty() {
                kv.push(&format!("check.{}.detail", c.name), &c.detail);
            }
        }
        kv.push("passed", self.passed());
        kv
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Report => Ok(self.to_kv().to_string()),
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
