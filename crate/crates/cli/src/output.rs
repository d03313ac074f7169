//! JSON-lines and CSV writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bindex::{CriterionReport, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Sink {
    out: Box<dyn Write>,
    holds: usize,
    fails: usize,
    inconclusive: usize,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Self { out, holds: 0, fails: 0, inconclusive: 0 })
    }

    pub fn line<S: Serialize>(&mut self, value: &S) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, value)?;
        self.out.write_all(b"\n")
    }

    pub fn report(&mut self, report: &CriterionReport) -> io::Result<()> {
        match report.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => self.fails += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        self.line(report)
    }

    /// Writes the verdict summary line and returns the aggregate verdict.
    pub fn summary(&mut self) -> io::Result<Verdict> {
        let s = json!({"summary": {"holds": self.holds, "fails": self.fails, "inconclusive": self.inconclusive}});
        self.line(&s)?;
        Ok(if self.fails > 0 {
            Verdict::Fails
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        })
    }

    pub fn raw(&mut self) -> &mut dyn Write {
        &mut self.out
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// JSON `null` for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
