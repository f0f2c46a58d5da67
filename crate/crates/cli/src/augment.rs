use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::Args;
use serde_json::json;
use tapscan::augment::{
    apply_roll_to_trackset, aspect_crop, read_frames_dir, sample_roll_params, write_frames_dir, Resample, RollConfig,
};
use tapscan::TrackSet;

use crate::{print_json, Status};

#[derive(Args)]
pub struct AugmentArgs {
    #[arg(long = "in-tracks")]
    in_tracks: PathBuf,
    /// Directory of frame container files matching the tracks.
    #[arg(long = "in-frames")]
    in_frames: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Output prefix: writes `<PREFIX>.tracks.json`, `<PREFIX>.augment.json`
    /// and, with frames, `<PREFIX>.frames/`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    roll: bool,
    /// Aspect-ratio range `LO:HI` (width over height).
    #[arg(long, value_parser = parse_range)]
    aspect: Option<(f64, f64)>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    s.into()
}

pub fn run(args: &AugmentArgs) -> Result<Status> {
    let mut tracks = TrackSet::load(&args.in_tracks).with_context(|| format!("reading {}", args.in_tracks.display()))?;
    let mut frames = match &args.in_frames {
        Some(dir) => read_frames_dir(dir).with_context(|| format!("reading frames from {}", dir.display()))?,
        None => vec![],
    };
    if args.in_frames.is_some() && frames.is_empty() {
        return Err(anyhow!("no frame files found"));
    }

    let mut roll = None;
    if args.roll {
        let v = tracks.video;
        let params = sample_roll_params(args.seed, &RollConfig::default(), v.height, v.width, v.frames)?;
        (frames, tracks) = apply_roll_to_trackset(&params, &frames, &tracks, Resample::Nearest)?;
        roll = Some(params);
    }
    let mut crop = None;
    if let Some(range) = args.aspect {
        let (f, t, spec) = aspect_crop(args.seed.wrapping_add(1), &frames, &tracks, range)?;
        (frames, tracks, crop) = (f, t, Some(spec));
    }

    let tracks_path = with_suffix(&args.out, ".tracks.json");
    tracks.save(&tracks_path).with_context(|| format!("writing {}", tracks_path.display()))?;
    let frames_path = with_suffix(&args.out, ".frames");
    if !frames.is_empty() {
        write_frames_dir(&frames_path, &frames).with_context(|| format!("writing {}", frames_path.display()))?;
    }
    let record = json!({ "seed": args.seed, "roll": roll, "aspect_crop": crop });
    let record_path = with_suffix(&args.out, ".augment.json");
    fs::write(&record_path, serde_json::to_string_pretty(&record)?).with_context(|| format!("writing {}", record_path.display()))?;
    print_json(&json!({
        "tracks": tracks_path,
        "frames": if frames.is_empty() { None } else { Some(frames_path) },
        "record": record_path,
        "kept_tracks": tracks.tracks.len(),
        "video": { "frames": tracks.video.frames, "height": tracks.video.height, "width": tracks.video.width },
    }))?;
    Ok(Status::Ok)
}
