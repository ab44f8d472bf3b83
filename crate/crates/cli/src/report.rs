use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Everything a subcommand emits, in all three renderings. Nothing here may
/// depend on timing or thread count.
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub text: Vec<String>,
    pub csv_header: String,
    pub csv_rows: Vec<String>,
    pub rows: Vec<Value>,
    pub extra: Value,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, csv_header: &str) -> Self {
        Self {
            command,
            seed,
            text: Vec::new(),
            csv_header: csv_header.to_string(),
            csv_rows: Vec::new(),
            rows: Vec::new(),
            extra: Value::Null,
            pass: true,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let _ = writeln!(out, "# fiid {} seed={}", self.command, self.seed);
                for l in &self.text {
                    let _ = writeln!(out, "{l}");
                }
                let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
            }
            Format::Csv => {
                let _ = writeln!(out, "# fiid {} seed={}", self.command, self.seed);
                let _ = writeln!(out, "{}", self.csv_header);
                for r in &self.csv_rows {
                    let _ = writeln!(out, "{r}");
                }
            }
            Format::Json => {
                let v = json!({
                    "schema": fiid::processes::SCHEMA_VERSION,
                    "command": self.command,
                    "seed": self.seed,
                    "pass": self.pass,
                    "rows": self.rows,
                    "extra": self.extra,
                });
                out = serde_json::to_string_pretty(&v).expect("reports serialize");
                out.push('\n');
            }
        }
        out
    }
}

pub fn ok(b: bool) -> &'static str {
    if b {
        "OK"
    } else {
        "VIOLATED"
    }
}

pub fn status(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}
