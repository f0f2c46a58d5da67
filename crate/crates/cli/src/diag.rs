use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use tapscan::diagnostics::{eigenvalue_histogram, state_norm_trajectory, Decay};

use crate::{emit, Status};

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// State-norm trajectory under constant input.
    Norms,
    /// Histogram of decay values over [0, 1].
    Hist,
}

#[derive(Args)]
pub struct DiagArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Comma-separated decay vector, used every step (norms) or binned (hist).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    decay: Vec<f64>,
    /// Comma-separated constant input vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    input: Vec<f64>,
    /// Comma-separated initial state; zeros when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    h0: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    frames: usize,
    /// Text file of decay values separated by whitespace or commas (hist).
    #[arg(long)]
    values: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_values(path: &PathBuf) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| anyhow!("{s:?} in {}: {e}", path.display())))
        .collect()
}

pub fn run(args: &DiagArgs) -> Result<Status> {
    let csv = match args.mode {
        Mode::Norms => {
            if args.decay.is_empty() || args.input.is_empty() {
                bail!("norms mode needs --decay and --input");
            }
            let h0 = if args.h0.is_empty() { vec![0.0; args.decay.len()] } else { args.h0.clone() };
            state_norm_trajectory(&Decay::Constant(args.decay.clone()), &args.input, &h0, args.frames)?.to_csv()
        }
        Mode::Hist => {
            let values = match &args.values {
                Some(path) => read_values(path)?,
                None => args.decay.clone(),
            };
            eigenvalue_histogram(&values, args.bins)?.to_csv()
        }
    };
    match &args.out {
        Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
        None => emit(&csv)?,
    }
    Ok(Status::Ok)
}
