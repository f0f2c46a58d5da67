//! Centered aspect-ratio crops.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frame::Frame;
use super::requery;
use crate::error::{Error, Result};
use crate::tracks::{Track, TrackSet, VideoDims};

pub const DEFAULT_ASPECT_RANGE: (f64, f64) = (0.5, 2.0);

/// Ratio is width over height. The rectangle is in source pixel coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AspectCropSpec {
    pub ratio: f64,
    pub x0: usize,
    pub y0: usize,
    pub width: usize,
    pub height: usize,
}

impl AspectCropSpec {
    /// Largest centered crop of the given ratio.
    pub fn centered(ratio: f64, height: usize, width: usize) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::Config(format!("aspect ratio must be positive, got {ratio}")));
        }
        let (cw, ch) = if ratio >= width as f64 / height as f64 {
            (width, ((width as f64 / ratio).round() as usize).min(height))
        } else {
            (((height as f64 * ratio).round() as usize).min(width), height)
        };
        if cw == 0 || ch == 0 {
            return Err(Error::Config(format!("ratio {ratio} leaves an empty crop of a {width}x{height} frame")));
        }
        Ok(Self { ratio, x0: (width - cw) / 2, y0: (height - ch) / 2, width: cw, height: ch })
    }
}

/// Draws a ratio log-uniformly from `range` and crops to it.
pub fn aspect_crop(
    seed: u64,
    frames: &[Frame],
    tracks: &TrackSet,
    range: (f64, f64),
) -> Result<(Vec<Frame>, TrackSet, AspectCropSpec)> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
        return Err(Error::Config(format!("invalid aspect range {lo}:{hi}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = if lo == hi { lo } else { (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp() };
    aspect_crop_with_ratio(ratio, frames, tracks)
}

pub fn aspect_crop_with_ratio(ratio: f64, frames: &[Frame], tracks: &TrackSet) -> Result<(Vec<Frame>, TrackSet, AspectCropSpec)> {
    let v = tracks.video;
    if !frames.is_empty() && (frames.len() != v.frames || frames.iter().any(|f| (f.height(), f.width()) != (v.height, v.width))) {
        return Err(Error::Shape("frames do not match the track video dims".into()));
    }
    let spec = AspectCropSpec::centered(ratio, v.height, v.width)?;
    let out_frames = frames
        .iter()
        .map(|f| {
            let mut out = Frame::zeros(spec.height, spec.width, f.channels()).with_dtype(f.dtype());
            for y in 0..spec.height {
                for x in 0..spec.width {
                    out.pixel_mut(x, y).copy_from_slice(f.pixel(x + spec.x0, y + spec.y0));
                }
            }
            out
        })
        .collect();
    let video = VideoDims { frames: v.frames, height: spec.height, width: spec.width };
    let (ox, oy) = (spec.x0 as f64, spec.y0 as f64);
    let out_tracks = tracks
        .tracks
        .iter()
        .filter_map(|tr| {
            let positions: Vec<[f64; 2]> = tr.positions.iter().map(|p| [p[0] - ox, p[1] - oy]).collect();
            let visibility = positions.iter().zip(&tr.visibility).map(|(p, &vis)| vis && video.contains(*p)).collect();
            requery(Track { id: tr.id, query: tr.query, positions, visibility })
        })
        .collect();
    Ok((out_frames, TrackSet { video, tracks: out_tracks }, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracks::Query;

    fn tracks(points: &[[f64; 2]]) -> TrackSet {
        let video = VideoDims { frames: 2, height: 256, width: 256 };
        let tracks = points
            .iter()
            .enumerate()
            .map(|(i, &p)| Track {
                id: i as u64,
                query: Query { t: 0, x: p[0], y: p[1] },
                positions: vec![p, [128.0, 128.0]],
                visibility: vec![true, true],
            })
            .collect();
        TrackSet::new(video, tracks).unwrap()
    }

    #[test]
    fn crop_geometry() {
        let s = AspectCropSpec::centered(2.0, 256, 256).unwrap();
        assert_eq!((s.width, s.height, s.x0, s.y0), (256, 128, 0, 64));
        let s = AspectCropSpec::centered(0.5, 256, 256).unwrap();
        assert_eq!((s.width, s.height, s.x0, s.y0), (128, 256, 64, 0));
        assert!(matches!(AspectCropSpec::centered(1e-4, 4, 4), Err(Error::Config(_))));
    }

    #[test]
    fn point_outside_crop_loses_visibility() {
        let (_, out, _) = aspect_crop_with_ratio(2.0, &[], &tracks(&[[10.0, 200.0]])).unwrap();
        let tr = &out.tracks[0];
        assert_eq!(tr.positions[0], [10.0, 136.0]);
        assert_eq!(tr.visibility, vec![false, true]);
        assert_eq!(tr.query.t, 1);
        assert_eq!((out.video.width, out.video.height), (256, 128));
    }

    #[test]
    fn source_ratio_is_identity() {
        let ts = tracks(&[[10.0, 200.0], [3.5, 7.25]]);
        let frames = vec![Frame::new(256, 256, 1, (0..256 * 256).map(|v| v as f32).collect()).unwrap(); 2];
        let (f, out, spec) = aspect_crop_with_ratio(1.0, &frames, &ts).unwrap();
        assert_eq!(out, ts);
        assert_eq!(f, frames);
        assert_eq!((spec.x0, spec.y0), (0, 0));
    }

    #[test]
    fn seeded_ratio_in_range() {
        let ts = tracks(&[[128.0, 128.0]]);
        for seed in 0..20 {
            let (_, _, spec) = aspect_crop(seed, &[], &ts, DEFAULT_ASPECT_RANGE).unwrap();
            assert!((0.5..=2.0).contains(&spec.ratio));
            assert_eq!(spec, aspect_crop(seed, &[], &ts, DEFAULT_ASPECT_RANGE).unwrap().2);
        }
        assert!(aspect_crop(0, &[], &ts, (2.0, 0.5)).is_err());
    }

    #[test]
    fn frames_are_cropped() {
        let ts = TrackSet::new(VideoDims { frames: 1, height: 2, width: 4 }, vec![]).unwrap();
        let f = Frame::new(2, 4, 1, (0..8).map(|v| v as f32).collect()).unwrap();
        let (out, _, _) = aspect_crop_with_ratio(1.0, &[f], &ts).unwrap();
        assert_eq!(out[0].data(), &[1.0, 2.0, 5.0, 6.0]);
    }
}
