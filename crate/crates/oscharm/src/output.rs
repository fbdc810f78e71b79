//! CSV tables with `#` comment headers and `RESULT` summary lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// Round-trippable decimal rendering with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table preceded by `#` comment lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv = csv::WriterBuilder::new().flexible(true).from_writer(&mut w);
        if !self.header.is_empty() {
            csv.write_record(&self.header)?;
        }
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush()?;
        drop(csv);
        w.flush()?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn save(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
                self.write_to(BufWriter::new(f))
                    .with_context(|| format!("cannot write {}", p.display()))
            }
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Outcome of one embedded check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub value: f64,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool, value: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            pass,
            value,
            detail: detail.into(),
        }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// `RESULT <id> PASS|FAIL <value>`.
    pub fn result_line(&self) -> String {
        format!("RESULT {} {} {}", self.id, self.status(), num(self.value))
    }
}

/// Prints `RESULT` lines: to stdout when the table went to a file, else to
/// stderr so that stdout stays a clean CSV stream.
pub fn report(checks: &[Check], table_on_stdout: bool) {
    for c in checks {
        if table_on_stdout {
            eprintln!("{}", c.result_line());
        } else {
            println!("{}", c.result_line());
        }
    }
}
