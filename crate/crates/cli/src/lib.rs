//! The `semple` command line: argument handling, output formatting and
//! exit statuses. [`run`] is the whole program minus process I/O.

pub mod args;
pub mod commands;
pub mod parse;

use std::fmt;

use clap::Parser;
use semple_core::{Error, ErrorKind};
use serde_json::json;

use crate::args::Cli;
use crate::parse::{CurveError, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    Curve(CurveError),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Curve(CurveError::ConstantTerm { .. }) => EXIT_DOMAIN,
            CliError::Curve(_) => EXIT_USAGE,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => EXIT_USAGE,
                ErrorKind::Domain => EXIT_DOMAIN,
                ErrorKind::NotFound => EXIT_NOT_FOUND,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) | CliError::Curve(CurveError::Parse(_)) => "parse",
            CliError::Curve(CurveError::ConstantTerm { .. }) => "domain",
            CliError::Curve(CurveError::TruncBelowInput { .. }) => "usage",
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => "input",
                ErrorKind::Domain => "domain",
                ErrorKind::NotFound => "not_found",
            },
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let mut body = json!({
            "kind": self.kind(),
            "exit": self.exit_code(),
            "message": self.to_string(),
        });
        let extra = match self {
            CliError::Parse(p) | CliError::Curve(CurveError::Parse(p)) => {
                json!({ "position": p.position })
            }
            CliError::Core(Error::TruncationTooSmall { trunc, suggested }) => {
                json!({ "trunc": trunc, "suggested_trunc": suggested })
            }
            _ => json!({}),
        };
        if let (Some(b), serde_json::Value::Object(e)) = (body.as_object_mut(), extra) {
            b.extend(e);
        }
        json!({ "error": body })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Parse(e) => e.fmt(f),
            CliError::Curve(e) => e.fmt(f),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the program on `argv` (including the program name) inside a
/// thread pool of the requested size.
pub fn run<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let threads = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli.threads,
        Err(_) => 1,
    };
    if threads == 0 {
        return Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: "error: --threads must be positive\n".into(),
        };
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| dispatch(&argv)),
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: cannot start {threads} threads: {e}\n"),
        },
    }
}

/// [`run`] on the current thread pool.
pub fn dispatch(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as Clap;
            let rendered = e.render().to_string();
            return match e.kind() {
                Clap::DisplayHelp | Clap::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => {
                    let wants_json = argv.iter().any(|a| a == "--json");
                    let message = rendered.trim().to_string();
                    Outcome {
                        code: EXIT_USAGE,
                        stdout: if wants_json {
                            format!(
                                "{}\n",
                                json!({ "error": { "kind": "usage", "exit": EXIT_USAGE, "message": message } })
                            )
                        } else {
                            String::new()
                        },
                        stderr: rendered.to_string(),
                    }
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => {
            let stdout = if cli.json && !report.json_lines {
                report.json.to_string()
            } else {
                report.text
            };
            Outcome {
                code: report.status,
                stdout: format!("{stdout}\n"),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: if cli.json {
                format!("{}\n", e.to_json())
            } else {
                String::new()
            },
            stderr: format!("error: {e}\n"),
        },
    }
}
