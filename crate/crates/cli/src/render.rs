use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

use crate::{Format, SCHEMA_VERSION};

/// Result of one subcommand: a JSON payload, its text rendering and the
/// verdict of the internal cross-checks.
pub struct Outcome {
    pub command: &'static str,
    pub result: Value,
    pub text: String,
    pub ok: bool,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: &'static str,
    command: &'a str,
    precision_bits: u32,
    ok: bool,
    warnings: &'a [String],
    result: &'a Value,
}

impl Outcome {
    pub fn new(command: &'static str, result: impl Serialize, text: String, ok: bool) -> anyhow::Result<Self> {
        Ok(Outcome {
            command,
            result: serde_json::to_value(result)?,
            text,
            ok,
            warnings: Vec::new(),
        })
    }

    pub fn render(&self, format: Format, precision_bits: u32) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command: self.command,
                    precision_bits,
                    ok: self.ok,
                    warnings: &self.warnings,
                    result: &self.result,
                };
                let mut s = serde_json::to_string_pretty(&env)?;
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!("# {} ({SCHEMA_VERSION}, {precision_bits} bits)\n", self.command);
                for w in &self.warnings {
                    s.push_str(&format!("warning: {w}\n"));
                }
                s.push_str(&self.text);
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        })
    }

    pub fn write(&self, format: Format, out: Option<&Path>, precision_bits: u32) -> anyhow::Result<()> {
        let body = self.render(format, precision_bits)?;
        match out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let n = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(n) {
            width[i] = width[i].max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.to_vec());
    for row in rows {
        s.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    s
}
