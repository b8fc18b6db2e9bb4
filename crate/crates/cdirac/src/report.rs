//! The `cdirac-report/1` JSON report written by every subcommand.

use cdirac_core::pipeline::{Check, Verdict};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA: &str = "cdirac-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub residual: Option<f64>,
    /// `true`/`false`, or a string for informational entries.
    pub verdict: Value,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOut {
    pub fn residual(name: &str, residual: f64, tolerance: f64) -> Self {
        CheckOut {
            name: name.into(),
            residual: Some(residual),
            verdict: Value::Bool(residual < tolerance),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn boolean(name: &str, ok: bool) -> Self {
        CheckOut { name: name.into(), residual: None, verdict: Value::Bool(ok), tolerance: None, detail: None }
    }

    pub fn info(name: &str, value: impl Into<String>) -> Self {
        CheckOut { name: name.into(), residual: None, verdict: Value::String(value.into()), tolerance: None, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Only an explicit `false` counts against the status.
    pub fn failed(&self) -> bool {
        self.verdict == Value::Bool(false)
    }
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        let verdict = match &c.verdict {
            Verdict::Pass => Value::Bool(true),
            Verdict::Fail => Value::Bool(false),
            Verdict::Info(s) => Value::String(s.clone()),
        };
        CheckOut { name: c.name.clone(), residual: c.residual, verdict, tolerance: c.tolerance, detail: c.detail.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorOut {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub checks: Vec<CheckOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorOut>,
    pub seed: u64,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            inputs: Map::new(),
            checks: Vec::new(),
            result: None,
            status: Status::Pass,
            error: None,
            seed,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.into(), value.into());
    }

    pub fn push(&mut self, check: CheckOut) {
        self.checks.push(check);
    }

    /// Status from the checks, unless an error has been recorded.
    pub fn finalize(mut self) -> Self {
        if self.error.is_none() {
            self.status = if self.checks.iter().any(CheckOut::failed) { Status::Fail } else { Status::Pass };
        }
        self
    }

    pub fn fail_with(mut self, err: CliError) -> Self {
        self.status = match err.kind() {
            ErrorKind::Verification => Status::Fail,
            _ => Status::Error,
        };
        self.error = Some(ErrorOut { kind: err.kind().as_str(), message: err.to_string() });
        self
    }

    pub fn exit_code(&self) -> i32 {
        match (self.status, &self.error) {
            (Status::Pass, _) => 0,
            (Status::Fail, _) => 1,
            (Status::Error, Some(e)) if e.kind == ErrorKind::Unsupported.as_str() => 3,
            (Status::Error, _) => 2,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("reports serialize")
        } else {
            serde_json::to_string(self).expect("reports serialize")
        }
    }

    /// One line per check, for a terminal.
    pub fn summary(&self) -> String {
        let mut out = format!("{} [{}]\n", self.command, status_str(self.status));
        for c in &self.checks {
            let mark = match &c.verdict {
                Value::Bool(true) => "ok  ".to_string(),
                Value::Bool(false) => "FAIL".to_string(),
                other => format!("info {}", other.as_str().unwrap_or_default()),
            };
            let res = c.residual.map(|r| format!(" residual {r:.3e}")).unwrap_or_default();
            let tol = c.tolerance.map(|t| format!(" < {t:e}")).unwrap_or_default();
            out.push_str(&format!("  {mark} {}{res}{tol}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  ({d})"));
            }
            out.push('\n');
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  {}: {}\n", e.kind, e.message));
        }
        out
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Unsupported,
    /// Internal consistency failure; reported as a failed verification.
    Verification,
}

impl ErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorKind::Input => "input",
            ErrorKind::Unsupported => "unsupported",
            ErrorKind::Verification => "consistency",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let mut r = Report::new("x", 1);
        r.push(CheckOut::residual("a", 1e-12, 1e-9));
        r.push(CheckOut::info("b", "S1"));
        let r = r.finalize();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.exit_code(), 0);

        let mut r = Report::new("x", 1);
        r.push(CheckOut::residual("a", 1e-3, 1e-9));
        let r = r.finalize();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let r = Report::new("x", 1).fail_with(CliError::Input("bad".into()));
        assert_eq!((r.status, r.exit_code()), (Status::Error, 2));
        let r = Report::new("x", 1).fail_with(CliError::Unsupported("e6".into()));
        assert_eq!((r.status, r.exit_code()), (Status::Error, 3));
        let r = Report::new("x", 1).fail_with(CliError::Core(cdirac_core::Error::Consistency("m".into())));
        assert_eq!((r.status, r.exit_code()), (Status::Fail, 1));
    }

    #[test]
    fn nan_residual_serializes_as_null() {
        let mut r = Report::new("x", 1);
        r.push(CheckOut::residual("a", f64::NAN, 1e-9));
        let v: Value = serde_json::from_str(&r.finalize().to_json(false)).unwrap();
        assert!(v["checks"][0]["residual"].is_null());
        assert_eq!(v["checks"][0]["verdict"], Value::Bool(false));
    }
}
