//! Command-line front end for `relconvex-core`.

pub mod args;
pub mod commands;
pub mod input;
pub mod oracle;
pub mod report;
pub mod reproduce;

use std::time::Instant;

use anyhow::Result;
use serde_json::Value;

use args::{Cli, Command};
use commands::Outcome;
use report::{classify, verdict_exit_code, ErrorReport, RunReport};

fn subcommand_name(cmd: &Command) -> String {
    let name = match cmd {
        Command::Majorize(_) => "majorize",
        Command::Transport(_) => "transport",
        Command::Certify(_) => "certify",
        Command::Boundary(_) => "boundary",
        Command::Verify(v) => return format!("verify {}", variant_name(v)),
        Command::Spectra(s) => return format!("spectra {}", variant_name(s)),
        Command::Poly(p) => return format!("poly {}", variant_name(p)),
        Command::Reproduce(_) => "reproduce",
    };
    name.to_string()
}

fn variant_name<T: std::fmt::Debug>(v: &T) -> String {
    let debug = format!("{v:?}");
    let head: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, c) in head.chars().enumerate() {
        if c.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

/// Executes the parsed command. Returns the report and its text rendering.
pub fn run(cli: &Cli) -> (RunReport, String) {
    let start = Instant::now();
    let tol = cli.tol;
    let mut timings = None;
    let result: Result<Outcome> = if !(tol.is_finite() && tol >= 0.0) {
        Err(anyhow::anyhow!("tolerance {tol} must be finite and nonnegative"))
    } else {
        match &cli.command {
            Command::Majorize(a) => commands::majorize(a, tol),
            Command::Transport(a) => commands::transport(a, tol),
            Command::Certify(a) => commands::certify(a, tol),
            Command::Boundary(a) => commands::boundary(a, tol),
            Command::Verify(c) => commands::verify(c, tol),
            Command::Spectra(c) => commands::spectra(c, tol),
            Command::Poly(c) => commands::poly(c, tol),
            Command::Reproduce(a) => reproduce::reproduce(a, tol).map(|(outcome, t)| {
                timings = Some(t);
                outcome
            }),
        }
    };
    let subcommand = subcommand_name(&cli.command);
    let mut report = match result {
        Ok(o) => RunReport {
            subcommand,
            exit_code: verdict_exit_code(o.verdict),
            inputs: o.inputs,
            verdict: o.verdict,
            value: o.value,
            residuals: o.residuals,
            tolerances: o.tolerances,
            error: None,
            wall_time_ms: 0.0,
        },
        Err(e) => {
            let kind = classify(&e);
            RunReport {
                subcommand,
                inputs: Value::Null,
                verdict: None,
                value: Value::Null,
                residuals: Value::Null,
                tolerances: serde_json::json!({ "tol": tol }),
                error: Some(ErrorReport {
                    kind,
                    message: format!("{e:#}"),
                }),
                exit_code: kind.exit_code(),
                wall_time_ms: 0.0,
            }
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let text = match (&timings, report.value.get("entries")) {
        (Some(t), Some(entries)) if report.error.is_none() => {
            let entries: Vec<reproduce::Entry> = serde_json::from_value(entries.clone()).unwrap_or_default();
            reproduce::render_text(&entries, t)
        }
        _ => report.render_text(),
    };
    (report, text)
}
