use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod augment;
mod bench;
mod diag;
mod eval;
mod gen;

#[derive(Parser)]
#[command(name = "tapscan", version, about = "Sequence-parallel scans and long-sequence tracking evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the distributed scan against the sequential oracle and report communication.
    ScanBench(bench::ScanBenchArgs),
    /// Compare analytic gradients with central finite differences.
    GradCheck(bench::GradCheckArgs),
    /// Score predicted tracks against ground truth.
    Eval(eval::EvalArgs),
    /// Generate a synthetic scene's ground-truth tracks.
    Gen(gen::GenArgs),
    /// Apply roll and/or aspect-ratio augmentation to tracks and frames.
    Augment(augment::AugmentArgs),
    /// Recurrent-state diagnostics as CSV.
    Diag(diag::DiagArgs),
}

/// Result of a subcommand that ran to completion.
pub enum Status {
    Ok,
    CheckFailed,
}

/// Writes to standard output; a closed pipe is not an error.
pub fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::ScanBench(args) => bench::scan_bench(&args),
        Command::GradCheck(args) => bench::grad_check(&args),
        Command::Eval(args) => eval::run(&args),
        Command::Gen(args) => gen::run(&args),
        Command::Augment(args) => augment::run(&args),
        Command::Diag(args) => diag::run(&args),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
