use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use selectivity::{Error, PropertyReport};

/// Report rendering selected by `--format`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    /// Verdict-first lines meant for people.
    Text,
    /// Space-separated key=value lines meant for harnesses.
    Lines,
    /// DOT graph text; only the digraph subcommand produces it.
    Dot,
}

/// Collects the report and the overall verdict; nothing is printed until
/// `write_out`, so a run is all-or-nothing on its output file.
pub struct Sink {
    format: OutFormat,
    buf: String,
    pub all_pass: bool,
}

impl Sink {
    pub fn new(format: OutFormat) -> Sink {
        Sink { format, buf: String::new(), all_pass: true }
    }

    pub fn format(&self) -> OutFormat {
        self.format
    }

    pub fn push_line(&mut self, line: impl AsRef<str>) {
        self.buf.push_str(line.as_ref());
        self.buf.push('\n');
    }

    /// Raw multi-line block (DOT output), pushed verbatim.
    pub fn push_block(&mut self, block: &str) {
        self.buf.push_str(block);
        if !block.ends_with('\n') {
            self.buf.push('\n');
        }
    }

    pub fn fail(&mut self) {
        self.all_pass = false;
    }

    pub fn push_report(&mut self, r: &PropertyReport) {
        if !r.pass {
            self.all_pass = false;
        }
        let line = match self.format {
            OutFormat::Lines => r.one_line(),
            _ => {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let mut s = format!(
                    "{verdict} {} subject={} pairs={} triples={}",
                    r.property, r.subject, r.pairs_checked, r.triples_checked
                );
                if let Some(w) = &r.witness {
                    s.push_str(&format!(" witness={w}"));
                }
                s
            }
        };
        self.push_line(line);
    }

    /// Reports the value, or renders a failed-precondition report and marks
    /// the run failed. Other errors abort the run.
    pub fn catch<T>(&mut self, r: Result<T, Error>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::Precondition { report, .. }) => {
                self.push_report(&report);
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Renders the report a check produced, whether it came back as a value
    /// or as a failed precondition.
    pub fn push_caught(&mut self, r: Result<PropertyReport, Error>) -> Result<()> {
        if let Some(report) = self.catch(r)? {
            self.push_report(&report);
        }
        Ok(())
    }

    pub fn write_out(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => fs::write(path, &self.buf)
                .with_context(|| format!("writing report to {}", path.display())),
            None => {
                print!("{}", self.buf);
                Ok(())
            }
        }
    }
}
