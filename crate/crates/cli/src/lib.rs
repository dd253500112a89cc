//! The `owent` command-line tool as a library, so tests can run it in-process.

pub mod args;
mod commands;
pub mod config;
pub mod operations;
pub mod output;
mod parse;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::args::{Cli, Format};
use crate::output::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: "invalid-input".into(), message: message.into(), exit: EXIT_INPUT }
    }

    fn to_json(&self) -> String {
        let doc = json!({
            "schemaVersion": SCHEMA_VERSION,
            "error": { "code": self.code, "message": self.message, "exitCode": self.exit },
        });
        serde_json::to_string(&doc).expect("serializable") + "\n"
    }
}

impl From<owent::Error> for CliError {
    fn from(e: owent::Error) -> Self {
        let exit = if e.is_budget() {
            EXIT_BUDGET
        } else if matches!(e, owent::Error::Property(_)) {
            EXIT_VERDICT
        } else {
            EXIT_INPUT
        };
        CliError { code: e.code().into(), message: e.to_string(), exit }
    }
}

/// Exit code and the two output streams of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit, stdout: String::new(), stderr: e.to_json() }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
        }
        Err(e) => {
            let err = CliError { code: "usage".into(), message: e.to_string().trim().to_string(), exit: EXIT_INPUT };
            return Outcome::error(&err);
        }
    };
    match commands::execute(&cli.command) {
        Ok((rendered, common)) => {
            let text = match rendered.format(common.format.unwrap_or(Format::Json)) {
                Ok(t) => t,
                Err(e) => return Outcome::error(&e),
            };
            let code = if rendered.passed == Some(false) { EXIT_VERDICT } else { EXIT_OK };
            match &common.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome::error(&CliError::input(format!("cannot write {}: {e}", path.display()))),
                },
                None => Outcome { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => Outcome::error(&e),
    }
}
