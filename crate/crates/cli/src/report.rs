use std::path::Path;
use std::process::ExitCode;

use ddt_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
    InvalidInput,
    NumericalFailure,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::InvalidInput => 2,
            Status::NumericalFailure => 3,
        }
    }
}

/// A command that could not finish.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
    /// Partial results gathered before the failure.
    pub partial: Option<Value>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { status: Status::InvalidInput, message: message.into(), partial: None }
    }

    pub fn numerical(message: impl Into<String>, partial: Option<Value>) -> Self {
        Failure { status: Status::NumericalFailure, message: message.into(), partial }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_numerical() { Status::NumericalFailure } else { Status::InvalidInput };
        Failure { status, message: e.to_string(), partial: None }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl Check {
    pub fn new(name: &str, passed: bool, value: Option<f64>) -> Self {
        Check { name: name.to_string(), passed, value }
    }
}

/// What a command hands back on success.
pub struct Outcome {
    pub checks: Vec<Check>,
    pub summary: Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub config: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl Report {
    pub fn new(command: &str, config: Value, result: Result<Outcome, Failure>) -> Self {
        let (status, error, checks, summary) = match result {
            Ok(o) => {
                let status = if o.checks.iter().all(|c| c.passed) { Status::Ok } else { Status::VerificationFailed };
                (status, None, o.checks, o.summary)
            }
            Err(f) => (f.status, Some(f.message), Vec::new(), f.partial.unwrap_or(Value::Null)),
        };
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            config,
            status,
            error,
            checks,
            summary,
            wall_time_seconds: None,
        }
    }

    pub fn emit(&self, out_dir: Option<&Path>) -> ExitCode {
        let text = serde_json::to_string_pretty(self).expect("reports serialize") + "\n";
        print!("{text}");
        if let Some(dir) = out_dir {
            let path = dir.join(format!("{}.json", self.command));
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &text)) {
                eprintln!("ddt: cannot write {}: {e}", path.display());
                return ExitCode::from(Status::InvalidInput.code());
            }
        }
        if let Some(e) = &self.error {
            eprintln!("ddt {}: {e}", self.command);
        }
        ExitCode::from(self.status.code())
    }
}
