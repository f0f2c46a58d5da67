use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde_json::json;
use tapscan::scenegen::{simulate_scene, SceneConfig};

use crate::{print_json, Status};

#[derive(Args)]
pub struct GenArgs {
    /// JSON scene settings; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &GenArgs) -> Result<Status> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SceneConfig::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SceneConfig::default(),
    };
    cfg.seed = args.seed;
    let tracks = simulate_scene(&cfg)?;
    tracks.save(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    print_json(&json!({
        "out": args.out,
        "seed": cfg.seed,
        "frames": tracks.video.frames,
        "height": tracks.video.height,
        "width": tracks.video.width,
        "tracks": tracks.tracks.len(),
    }))?;
    Ok(Status::Ok)
}
