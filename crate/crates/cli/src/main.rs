mod args;
mod commands;
mod error;
mod settings;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn write_output(target: Option<&str>, text: &str) -> Result<(), CliError> {
    match target {
        None | Some("-") | Some("stdout") => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
        }
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        }),
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    let cmd = settings::with_config_file(cmd)?;
    let output = cmd.common().output.clone();
    let (text, misses) = match &cmd {
        Command::Sweep(a) => (commands::sweep(a)?, None),
        Command::Convergence(a) => (commands::convergence(a)?, None),
        Command::RequiredSnr(a) => (commands::required(a)?, None),
        Command::Validate(a) => {
            let (text, misses) = commands::validate(a)?;
            let total = text.lines().count() - 1;
            (text, Some((misses, total)))
        }
    };
    write_output(output.as_deref(), &text)?;
    match misses {
        Some((m, total)) if m > 0 => Err(CliError::Unbracketed(m, total)),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
