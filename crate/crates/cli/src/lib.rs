//! Document I/O, command dispatch and DOT output for the `exo` tool.
//!
//! Exit status is 0 on success, 1 when validation or a check fails (including
//! exceeded caps), and 2 on malformed input or bad usage.

pub mod commands;
pub mod doc;
pub mod dot;

use thiserror::Error;

pub use commands::Cli;
pub use doc::{emit, load, Document, FORMAT_VERSION};
pub use dot::emit_dot;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("invalid: {0}")]
    Validation(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// A check ran and its answer was negative.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Validation(_) | CliError::CapExceeded(_) | CliError::Failed(_) => 1,
        }
    }
}

/// What a single invocation printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match commands::execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(CliError::Failed(msg)) => Outcome {
            code: 1,
            stdout: format!("fail: {msg}\n"),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
