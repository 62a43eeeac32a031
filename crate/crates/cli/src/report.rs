use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the input file, or of the parameter string for generated inputs.
    pub inputs: String,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("reports serialize");
        bytes.push(b'\n');
        bytes
    }

    /// `key,value` rows; residuals are prefixed with `residual:`.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut out = String::from("key,value\n");
        out.push_str(&format!("command,{}\n", self.command));
        out.push_str(&format!("inputs,{}\n", self.inputs));
        for (k, v) in &self.residuals {
            out.push_str(&format!("residual:{k},{v}\n"));
        }
        out.push_str(&format!("pass,{}\n", self.pass));
        out.push_str(&format!("wall_time_ms,{}\n", self.wall_time_ms));
        out.into_bytes()
    }
}

/// Accumulates residuals with their tolerances.
///
/// Boolean checks enter as indicators: 0 when the property holds, 1 when it
/// does not, against a fixed tolerance of 0 that `--tol` does not override.
#[derive(Debug)]
pub struct Checks {
    started: Instant,
    override_tol: Option<f64>,
    entries: Vec<(String, f64, f64)>,
}

impl Checks {
    pub fn new(override_tol: Option<f64>) -> Self {
        Checks {
            started: Instant::now(),
            override_tol,
            entries: Vec::new(),
        }
    }

    pub fn residual(&mut self, label: impl Into<String>, value: f64, default_tol: f64) {
        let tol = self.override_tol.unwrap_or(default_tol);
        self.entries.push((label.into(), value, tol));
    }

    pub fn indicator(&mut self, label: impl Into<String>, holds: bool) {
        self.entries
            .push((label.into(), if holds { 0.0 } else { 1.0 }, 0.0));
    }

    pub fn finish(self, command: &str, inputs: String) -> CliResult<Report> {
        if let Some((label, value, _)) = self.entries.iter().find(|(_, v, _)| !v.is_finite()) {
            return Err(CliError::Numerical(format!("residual {label} is {value}")));
        }
        let pass = self.entries.iter().all(|(_, v, tol)| v <= tol);
        for (label, value, tol) in &self.entries {
            log::info!("{label}: {value:e} (tol {tol:e})");
        }
        Ok(Report {
            command: command.to_string(),
            inputs,
            residuals: self.entries.into_iter().map(|(k, v, _)| (k, v)).collect(),
            pass,
            wall_time_ms: self.started.elapsed().as_secs_f64() * 1e3,
        })
    }
}
