use std::io::{self, Write};

use serde_json::Value;

use crate::Format;

/// Text lines plus a JSON document for one command.
#[derive(Debug)]
pub struct Report {
    lines: Vec<String>,
    json: Value,
    /// `None` for plain success.
    verdict: Option<bool>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report { lines: Vec::new(), json, verdict: None }
    }

    pub fn verdict(mut self, v: bool) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> io::Result<()> {
        match format {
            Format::Text => self.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
            Format::Json => {
                writeln!(out, "{}", serde_json::to_string_pretty(&self.json).expect("JSON values serialize"))
            }
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }
}
