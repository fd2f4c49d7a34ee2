//! `mht`: batch front end for the mht-core experiments.
//!
//! Exit status 0 when every asserted contract holds, 1 on a contract
//! violation (the violating instance goes to stderr and, with `--out`, to
//! `<out>.violation.json`), 2 on configuration errors.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use config::{Cli, Flags, Format};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("config error: {0}")]
    Config(String),
    #[error("contract violated: {message}")]
    Contract { message: String, instance: Value },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<mht_core::Error> for Failure {
    fn from(e: mht_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

/// A rendered artifact plus the contract verdict.
pub struct Artifact {
    pub body: Vec<u8>,
    pub violation: Option<(String, Value)>,
}

pub fn json_doc(flags: &Flags, payload: Value) -> Vec<u8> {
    let mut doc = json!({ "config": flags });
    if let (Some(map), Value::Object(extra)) = (doc.as_object_mut(), payload) {
        map.extend(extra);
    }
    let mut body = serde_json::to_vec_pretty(&doc).expect("json values serialize");
    body.push(b'\n');
    body
}

pub fn csv_doc<T: Serialize>(flags: &Flags, rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut body = format!("# config: {}\n", serde_json::to_string(flags).expect("flags serialize")).into_bytes();
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Failure::Io(e.into()))?;
    }
    body.extend(writer.into_inner().map_err(|e| Failure::Io(e.into_error()))?);
    Ok(body)
}

pub fn format_or(flags: &Flags, default: Format) -> Format {
    flags.format.unwrap_or(default)
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let flags = match &cli.config {
        Some(path) => cli.flags.or(Flags::from_file(path)?),
        None => cli.flags,
    };
    let command = cli
        .command
        .or(flags.command)
        .ok_or_else(|| Failure::Config("no command given".into()))?;
    let flags = Flags {
        command: Some(command),
        ..flags
    };
    if command.randomized(&flags) {
        flags.seed()?;
    }
    if let Some(workers) = flags.workers {
        if workers == 0 {
            return Err(Failure::Config("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let artifact = commands::dispatch(command, &flags)?;
    emit(&flags.out, &artifact.body)?;
    if let Some((message, instance)) = artifact.violation {
        let record = serde_json::to_vec_pretty(&json!({ "config": flags, "violation": message, "instance": instance }))
            .expect("json values serialize");
        if let Some(out) = &flags.out {
            let mut path = out.clone().into_os_string();
            path.push(".violation.json");
            std::fs::write(path, &record)?;
        }
        return Err(Failure::Contract { message, instance });
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            match failure {
                Failure::Config(_) => ExitCode::from(2),
                Failure::Contract { instance, .. } => {
                    eprintln!("{}", serde_json::to_string(&instance).unwrap_or_default());
                    ExitCode::from(1)
                }
                Failure::Io(_) => ExitCode::from(1),
            }
        }
    }
}
