use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use hypersym::experiments::ExperimentReport;
use serde_json::Value;

use crate::args::Format;
use crate::CliError;

/// A command result in all three formats.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: String,
}

impl Output {
    /// Structural results: JSON object, hand-written text, `key,value` CSV.
    pub fn new(json: Value, text: String) -> Self {
        let mut csv = String::from("key,value\n");
        if let Value::Object(map) = &json {
            for (k, v) in map {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(csv, "{k},{}", csv_field(&v));
            }
        }
        Output { json, text, csv }
    }

    pub fn report(report: &ExperimentReport, text: String) -> Self {
        Output {
            json: serde_json::to_value(report).expect("reports serialize"),
            text,
            csv: format!("{}\n{}\n", ExperimentReport::CSV_HEADER, report.csv_row()),
        }
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        let body = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        };
        match path {
            Some(p) => std::fs::write(p, body).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Generic text rendering of an experiment report.
pub fn report_text(r: &ExperimentReport) -> String {
    let mut s = format!("{}\n", r.experiment);
    for (k, v) in &r.inputs {
        let _ = writeln!(s, "  {k}: {}", plain(v));
    }
    if let Some(seed) = r.seed {
        let _ = writeln!(s, "  seed: {seed}");
    }
    if let Some(t) = r.trials {
        let _ = writeln!(s, "  trials: {t}");
    }
    for (k, v) in &r.counts {
        let _ = writeln!(s, "{k}: {v}");
    }
    if let (Some(e), Some(se)) = (r.estimate, r.stderr) {
        let _ = writeln!(s, "estimate: {e} (stderr {se})");
    }
    for (k, v) in &r.bounds {
        let shown = match v.get("value") {
            Some(val) => plain(val),
            None => plain(v),
        };
        let _ = writeln!(s, "{k}: {shown}");
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(s, "witnesses (points from 0):");
        for w in &r.witnesses {
            let _ = writeln!(s, "  {w}");
        }
    }
    if let Some(ms) = r.runtime_ms {
        let _ = writeln!(s, "runtime: {ms} ms");
    }
    s
}
