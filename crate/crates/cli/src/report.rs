//! Machine-readable run reports.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub output: Value,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Report {
        Report {
            command: command.into(),
            config,
            status: Status::Pass,
            checks: vec![],
            output: Value::Null,
        }
    }

    /// Runs `f` as a named check. An `Err` counts as a failure with the error as detail.
    pub fn check(&mut self, name: &str, f: impl FnOnce() -> anyhow::Result<Outcome>) {
        let start = Instant::now();
        let (status, detail, witness) = match f() {
            Ok(Outcome { ok: Some(true), detail, witness }) => (Status::Pass, detail, witness),
            Ok(Outcome { ok: Some(false), detail, witness }) => (Status::Fail, detail, witness),
            Ok(Outcome { ok: None, detail, witness }) => (Status::Skipped, detail, witness),
            Err(e) => (Status::Fail, format!("{e:#}"), Value::Null),
        };
        self.push(CheckResult {
            name: name.into(),
            status,
            detail,
            witness,
            millis: start.elapsed().as_millis(),
        });
    }

    pub fn push(&mut self, c: CheckResult) {
        if c.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(c);
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn print(&self, json: bool) -> std::io::Result<()> {
        let mut out = std::io::stdout().lock();
        if json {
            writeln!(out, "{}", serde_json::to_string_pretty(self).expect("report serializes"))?;
            return Ok(());
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            writeln!(out, "{tag} {} ({} ms) {}", c.name, c.millis, c.detail)?;
        }
        if !self.output.is_null() {
            writeln!(out, "{}", serde_json::to_string_pretty(&self.output).expect("output serializes"))?;
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
            writeln!(out, "{}: {} checks, {failed} failed", self.command, self.checks.len())?;
        }
        Ok(())
    }
}

/// Result of one check body.
pub struct Outcome {
    /// `Some(pass)`, or `None` when skipped.
    pub ok: Option<bool>,
    pub detail: String,
    pub witness: Value,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> anyhow::Result<Outcome> {
        Ok(Outcome { ok: Some(true), detail: detail.into(), witness: Value::Null })
    }

    pub fn fail(detail: impl Into<String>, witness: Value) -> anyhow::Result<Outcome> {
        Ok(Outcome { ok: Some(false), detail: detail.into(), witness })
    }

    pub fn skip(detail: impl Into<String>) -> anyhow::Result<Outcome> {
        Ok(Outcome { ok: None, detail: detail.into(), witness: Value::Null })
    }

    pub fn from_bool(ok: bool, detail: impl Into<String>, witness: Value) -> anyhow::Result<Outcome> {
        Ok(Outcome { ok: Some(ok), detail: detail.into(), witness })
    }
}
