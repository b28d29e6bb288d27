//! The run report printed by every subcommand.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything but `wall_time_ms` is a deterministic function of the
/// arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: Value,
    /// `None` when the subcommand computes a value rather than a verdict.
    pub verdict: Option<bool>,
    pub value: Value,
    pub residuals: Value,
    pub tolerances: Value,
    pub error: Option<ErrorReport>,
    pub exit_code: i32,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: ErrorKind,
    pub message: String,
}

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_FALSE: i32 = 3;

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Input => EXIT_INPUT,
            ErrorKind::Numerical => EXIT_NUMERICAL,
        }
    }
}

/// Classifies an error by the first core error in its chain.
pub fn classify(err: &anyhow::Error) -> ErrorKind {
    let numerical = err
        .chain()
        .find_map(|e| e.downcast_ref::<relconvex_core::Error>())
        .is_some_and(relconvex_core::Error::is_numerical);
    if numerical {
        ErrorKind::Numerical
    } else {
        ErrorKind::Input
    }
}

pub fn verdict_exit_code(verdict: Option<bool>) -> i32 {
    match verdict {
        Some(false) => EXIT_FALSE,
        _ => EXIT_TRUE,
    }
}

impl RunReport {
    /// Human-readable rendering: the verdict, then the value and residual
    /// fields one per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(err) = &self.error {
            let kind = match err.kind {
                ErrorKind::Input => "input error",
                ErrorKind::Numerical => "numerical failure",
            };
            out.push_str(&format!("{}: {kind}: {}\n", self.subcommand, err.message));
            return out;
        }
        match self.verdict {
            Some(v) => out.push_str(&format!("{}: {v}\n", self.subcommand)),
            None => out.push_str(&format!("{}\n", self.subcommand)),
        }
        for section in [&self.value, &self.residuals] {
            match section {
                Value::Object(map) => {
                    for (k, v) in map {
                        out.push_str(&format!("  {k}: {}\n", compact(v)));
                    }
                }
                Value::Null => {}
                other => out.push_str(&format!("  {}\n", compact(other))),
            }
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
