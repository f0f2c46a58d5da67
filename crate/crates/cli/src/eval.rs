use std::fs;
use std::path::PathBuf;

use anyhow::{ensure, Context, Result};
use clap::Args;
use tapscan::metrics::{evaluate, EvalConfig, DEFAULT_D_MINS};
use tapscan::TrackSet;

use crate::{print_json, Status};

#[derive(Args)]
pub struct EvalArgs {
    /// Ground-truth track file; repeat for several videos.
    #[arg(long, required = true)]
    gt: Vec<PathBuf>,
    /// Prediction track file, paired with `--gt` by position.
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,
    #[arg(long = "d-min", value_delimiter = ',', default_values_t = DEFAULT_D_MINS)]
    d_min: Vec<usize>,
    #[arg(long = "survival-thresh", default_value_t = 50.0)]
    survival_thresh: f64,
    /// Also write the per-video table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn load(path: &PathBuf) -> Result<TrackSet> {
    TrackSet::load(path).with_context(|| format!("reading {}", path.display()))
}

pub fn run(args: &EvalArgs) -> Result<Status> {
    ensure!(args.gt.len() == args.pred.len(), "{} --gt files but {} --pred files", args.gt.len(), args.pred.len());
    ensure!(args.survival_thresh.is_finite() && args.survival_thresh > 0.0, "--survival-thresh must be positive");
    ensure!(!args.d_min.is_empty() && args.d_min.iter().all(|&d| d >= 1), "--d-min values must be at least 1");
    let gts = args.gt.iter().map(load).collect::<Result<Vec<_>>>()?;
    let preds = args.pred.iter().map(load).collect::<Result<Vec<_>>>()?;
    let videos: Vec<(String, &TrackSet, &TrackSet)> = args
        .gt
        .iter()
        .zip(gts.iter().zip(&preds))
        .map(|(path, (g, p))| (path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(), g, p))
        .collect();
    let cfg = EvalConfig { survival_threshold: args.survival_thresh, ..EvalConfig::default() };
    let report = evaluate(&videos, &args.d_min, &cfg)?;
    if let Some(path) = &args.csv {
        fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&report)?;
    Ok(Status::Ok)
}
