mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use commands::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(payload) => {
            emit(&payload);
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain { error, kind, message, payload }) => {
            if let Some(payload) = payload {
                emit(&payload);
            }
            eprintln!("{error}::{kind}: {message}");
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(payload: &serde_json::Value) {
    let text = serde_json::to_string_pretty(payload).expect("payload serializes");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
