use std::io::Write;

use anyhow::Result;
use ruelle::numbers::{format_rational, to_f64, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};

/// The resolved configuration of a run, embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub format: &'static str,
    pub out: Option<String>,
    pub params: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub result: Value,
    /// Short `key: value` lines for the text rendering.
    pub summary: Vec<(String, String)>,
    pub table: Table,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config,
            checks: Vec::new(),
            result: Value::Null,
            summary: Vec::new(),
            table: Table::default(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "checks": self.checks,
            "passed": self.passed(),
            "result": self.result,
        })
    }

    pub fn write_json(&self, w: &mut dyn Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *w, &self.to_json())?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.table.headers)?;
        for row in &self.table.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_text(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(w, "{} (seed {})", self.config.command, self.config.seed)?;
        for (k, v) in &self.config.params {
            writeln!(w, "  {k} = {v}")?;
        }
        for (k, v) in &self.summary {
            writeln!(w, "{k}: {v}")?;
        }
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(w, "[{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// `{"exact": "p/q", "float": x}`.
pub fn exact(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "float": to_f64(r) })
}
