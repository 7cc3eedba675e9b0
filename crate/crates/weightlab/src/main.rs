use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use weightlab::cli::{exit_code, run, Command, Options};
use weightlab::io::ModelFile;
use weightlab::Error;

#[derive(Parser)]
#[command(name = "weightlab", version, about = "Weight spectral sequences of normal-crossing models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight tables of the homology of each pair.
    Weights(Args),
    /// Page ranks and differential ranks.
    Pages(Args),
    /// Complete an E² class to a total cycle.
    Complete(Args),
    /// Run every consistency check on a model.
    Verify(Args),
    /// Boundary weights from the dual graph.
    Plumbing(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Model file (JSON, schema 1).
    file: PathBuf,
    /// Y, XY, X_XmY, XmY or dU.
    #[arg(long)]
    pair: Option<String>,
    /// Page number, or `inf`.
    #[arg(long)]
    r: Option<String>,
    /// `s,t,i`: generator i of E² at (s,t).
    #[arg(long)]
    seed: Option<String>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

fn diagnose(e: &Error) -> ExitCode {
    let code = exit_code(e);
    let kind = if code == 1 { "input" } else { "verification" };
    eprintln!("{}", serde_json::json!({ "schema": 1, "error": kind, "message": e.to_string() }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (cmd, args) = match cli.cmd {
        Cmd::Weights(a) => (Command::Weights, a),
        Cmd::Pages(a) => (Command::Pages, a),
        Cmd::Complete(a) => (Command::Complete, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Plumbing(a) => (Command::Plumbing, a),
    };
    let result = Options::parse(args.pair.as_deref(), args.r.as_deref(), args.seed.as_deref())
        .and_then(|opts| run(cmd, &ModelFile::load(&args.file)?, &opts));
    let report = match result {
        Ok(r) => r,
        Err(e) => return diagnose(&e),
    };
    match &args.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            if let Err(e) = std::fs::write(p, report.to_json()) {
                return diagnose(&Error::Input(format!("{}: {e}", p.display())));
            }
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
