mod args;
mod commands;
mod config;
mod error;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use qderiv::report::{render, Metadata, Table};

use args::Cli;
use commands::{Extra, Outcome};
use config::RunConfig;
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QDERIV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("QDERIV_THREADS={raw} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn emit(table: &Table, rc: &RunConfig, path: &Path) -> Result<(), CliError> {
    let meta = Metadata {
        tool: "qderiv".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: rc.command.name().into(),
        seed: Some(rc.seed),
        config: rc.echo.clone(),
    };
    write(path, &render(table, &meta, rc.format)?)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let (kind, flags) = cli.command.split();
    let rc = RunConfig::resolve(kind, flags)?;
    configure_threads()?;
    let Outcome {
        table,
        summary,
        ok,
        extra,
    } = commands::run(&rc)?;
    if let Some(path) = &rc.out {
        emit(&table, &rc, path)?;
    }
    for item in &extra {
        match item {
            Extra::Table(path, t) => emit(t, &rc, path)?,
            Extra::Text(path, text) => write(path, text)?,
        }
    }
    for note in &table.notes {
        eprintln!("note: {note}");
    }
    println!("{summary}");
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qderiv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
