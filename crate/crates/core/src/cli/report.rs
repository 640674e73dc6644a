use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::{emit_config, OutputFormat, RunConfig};
use crate::error::{Error, Result};

/// One simulated-versus-analytic comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub analytic: f64,
    pub simulated: f64,
    pub se: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when |simulated − analytic| ≤ k SE.
    pub fn within_se(quantity: impl Into<String>, analytic: f64, simulated: f64, se: f64, k: f64) -> Self {
        let pass = (simulated - analytic).abs() <= k * se;
        Self { quantity: quantity.into(), analytic, simulated, se, tolerance: k, pass }
    }

    /// Passes when |simulated/analytic − 1| < tol.
    pub fn relative(quantity: impl Into<String>, analytic: f64, simulated: f64, se: f64, tol: f64) -> Self {
        let pass = ((simulated - analytic) / analytic).abs() < tol;
        Self { quantity: quantity.into(), analytic, simulated, se, tolerance: tol, pass }
    }

    /// Passes when a distance statistic is below `tol` (analytic target 0).
    pub fn distance(quantity: impl Into<String>, stat: f64, tol: f64) -> Self {
        Self { quantity: quantity.into(), analytic: 0.0, simulated: stat, se: 0.0, tolerance: tol, pass: stat < tol }
    }

    /// Passes when simulated ≥ analytic (a lower bound).
    pub fn at_least(quantity: impl Into<String>, bound: f64, simulated: f64, se: f64) -> Self {
        Self { quantity: quantity.into(), analytic: bound, simulated, se, tolerance: 0.0, pass: simulated >= bound }
    }
}

/// Tabular result of one experiment.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn row(&mut self, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_csv(&self, cfg: &RunConfig) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        for line in emit_config(&cfg.echo())?.lines() {
            writeln!(buf, "# {line}").map_err(io_err)?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v))).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Numeric(format!("csv: {e}")))
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), json!(v))).collect::<Map<_, _>>()))
            .collect();
        let head = self.checks.first();
        let summary = json!({
            "analytic": head.map(|c| c.analytic),
            "simulated": head.map(|c| c.simulated),
            "se": head.map(|c| c.se),
            "tolerance": head.map(|c| c.tolerance),
            "pass": self.pass(),
            "checks": self.checks,
        });
        let doc = json!({ "config": cfg.echo(), "rows": rows, "summary": summary });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| Error::Numeric(format!("json: {e}")))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn write(&self, cfg: &RunConfig, path: &Path) -> Result<()> {
        let bytes = match cfg.format {
            OutputFormat::Csv => self.to_csv(cfg)?,
            OutputFormat::Json => self.to_json(cfg)?,
        };
        std::fs::write(path, bytes).map_err(|e| Error::Numeric(format!("cannot write {}: {e}", path.display())))
    }

    /// Human-readable summary table.
    pub fn summary_table(&self) -> String {
        let mut s = format!(
            "{:<40} {:>14} {:>14} {:>11} {:>10}  result\n",
            "quantity", "analytic", "simulated", "se", "tolerance"
        );
        for c in &self.checks {
            s.push_str(&format!(
                "{:<40} {:>14.6} {:>14.6} {:>11.3e} {:>10} {}\n",
                c.quantity,
                c.analytic,
                c.simulated,
                c.se,
                c.tolerance,
                if c.pass { "pass" } else { "FAIL" }
            ));
        }
        s
    }
}

/// Shortest round-trip representation, so files are exact and stable.
fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Numeric(format!("write: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv: {e}"))
}
