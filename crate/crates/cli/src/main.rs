mod args;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};
use commands::Outcome;
use hods_core::{Budget, Error};

/// Everything needed to reproduce a run.
#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'static str,
    argv: Vec<String>,
    flags: &'a Cli,
    seed: Option<u64>,
    tool_version: &'static str,
    budget_bits: u32,
    float_format: &'static str,
    summary: &'a serde_json::Value,
    notes: &'a [String],
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Matrices(_) => "matrices",
        Command::Verify(_) => "verify",
        Command::Dual(_) => "dual",
        Command::Walsh(_) => "walsh",
        Command::Disc(_) => "disc",
        Command::Study(_) => "study",
    }
}

fn dispatch(cli: &Cli, budget: Budget) -> hods_core::Result<Outcome> {
    match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Matrices(a) => commands::matrices(a),
        Command::Verify(a) => commands::verify(a, budget),
        Command::Dual(a) => commands::dual(a, budget),
        Command::Walsh(a) => commands::walsh(a, budget),
        Command::Disc(a) => commands::disc(a),
        Command::Study(a) => commands::study(a),
    }
}

fn manifest_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn emit(cli: &Cli, budget: Budget, outcome: &Outcome) -> std::io::Result<()> {
    let manifest = RunManifest {
        command: command_name(&cli.command),
        argv: std::env::args().skip(1).collect(),
        flags: cli,
        seed: outcome.seed,
        tool_version: env!("CARGO_PKG_VERSION"),
        budget_bits: budget.bits,
        float_format: "{:.16e}",
        summary: &outcome.summary,
        notes: &outcome.notes,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.text)?;
            std::fs::write(manifest_path(path), json)?;
        }
        None => {
            std::io::stdout().write_all(outcome.text.as_bytes())?;
            std::io::stderr().write_all(json.as_bytes())?;
        }
    }
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let budget = Budget::new(cli.budget_bits.unwrap_or(Budget::DEFAULT_BITS));
    let outcome = match dispatch(&cli, budget) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::InvalidInput(_) => 2,
                Error::ResourceLimit(_) => 3,
            });
        }
    };
    if let Err(e) = emit(&cli, budget, &outcome) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
