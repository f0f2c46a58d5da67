//! Sinusoidal roll: rotation about the image center followed by a periodic
//! translation on the `(W + m) x (H + m)` torus. Pixels that land in the
//! margin strip are not visible.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frame::Frame;
use super::requery;
use crate::error::{Error, Result};
use crate::numeric::Sinusoid;
use crate::tracks::{Track, TrackSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollParams {
    pub shift_x: Sinusoid,
    pub shift_y: Sinusoid,
    /// Radians.
    pub rotation: Sinusoid,
    pub margin: f64,
    pub height: usize,
    pub width: usize,
    pub frames: usize,
}

impl RollParams {
    pub fn identity(height: usize, width: usize, frames: usize) -> Self {
        Self {
            shift_x: Sinusoid::zero(),
            shift_y: Sinusoid::zero(),
            rotation: Sinusoid::zero(),
            margin: Self::default_margin(height, width),
            height,
            width,
            frames,
        }
    }

    /// Half the frame diagonal.
    pub fn default_margin(height: usize, width: usize) -> f64 {
        (height as f64 / 2.0).hypot(width as f64 / 2.0)
    }

    /// Torus extent `(W + m, H + m)`.
    pub fn period(&self) -> (f64, f64) {
        (self.width as f64 + self.margin, self.height as f64 + self.margin)
    }

    fn center(&self) -> (f64, f64) {
        (self.width as f64 / 2.0, self.height as f64 / 2.0)
    }

    /// `(dx, dy, theta)` at frame `t`.
    pub fn offsets(&self, t: usize) -> (f64, f64, f64) {
        (
            self.shift_x.at(t, self.frames),
            self.shift_y.at(t, self.frames),
            self.rotation.at(t, self.frames),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let sins = [self.shift_x, self.shift_y, self.rotation];
        let finite = sins.iter().all(|s| s.amplitude.is_finite() && s.frequency.is_finite() && s.phase.is_finite());
        if !finite || sins.iter().any(|s| s.amplitude < 0.0) {
            return Err(Error::Config("roll amplitudes must be finite and non-negative".into()));
        }
        if !(self.margin.is_finite() && self.margin > 0.0) {
            return Err(Error::Config(format!("roll margin must be positive, got {}", self.margin)));
        }
        if self.height == 0 || self.width == 0 || self.frames == 0 {
            return Err(Error::Config("roll video dims must be positive".into()));
        }
        Ok(())
    }
}

/// Sampling ranges for [`sample_roll_params`]. Amplitudes and frequencies are
/// drawn uniformly from `[0, max]`, phases uniformly from `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RollConfig {
    /// Translation amplitude cap as a fraction of the frame dimension on that axis.
    pub max_shift_fraction: f64,
    pub max_shift_frequency: f64,
    /// Radians.
    pub max_rotation: f64,
    pub max_rotation_frequency: f64,
    /// Overrides the half-diagonal margin.
    pub margin: Option<f64>,
}

impl Default for RollConfig {
    fn default() -> Self {
        Self {
            max_shift_fraction: 0.5,
            max_shift_frequency: 4.0,
            max_rotation: std::f64::consts::PI / 12.0,
            max_rotation_frequency: 4.0,
            margin: None,
        }
    }
}

pub fn sample_roll_params(seed: u64, cfg: &RollConfig, height: usize, width: usize, frames: usize) -> Result<RollParams> {
    let caps = [cfg.max_shift_fraction, cfg.max_shift_frequency, cfg.max_rotation, cfg.max_rotation_frequency];
    if caps.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Config("roll ranges must be finite and non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |amp: f64, freq: f64| Sinusoid {
        amplitude: rng.gen::<f64>() * amp,
        frequency: rng.gen::<f64>() * freq,
        phase: rng.gen::<f64>() * TAU,
    };
    let shift_x = draw(cfg.max_shift_fraction * width as f64, cfg.max_shift_frequency);
    let shift_y = draw(cfg.max_shift_fraction * height as f64, cfg.max_shift_frequency);
    let rotation = draw(cfg.max_rotation, cfg.max_rotation_frequency);
    let params = RollParams {
        shift_x,
        shift_y,
        rotation,
        margin: cfg.margin.unwrap_or_else(|| RollParams::default_margin(height, width)),
        height,
        width,
        frames,
    };
    params.validate()?;
    Ok(params)
}

fn rotate(p: [f64; 2], c: (f64, f64), theta: f64) -> [f64; 2] {
    if theta == 0.0 {
        return p;
    }
    let (s, co) = theta.sin_cos();
    let (dx, dy) = (p[0] - c.0, p[1] - c.1);
    [c.0 + co * dx - s * dy, c.1 + s * dx + co * dy]
}

/// Maps a source point to its wrapped location at frame `t`. The flag is true
/// when the result lies inside the visible `W x H` frame.
pub fn roll_point(params: &RollParams, t: usize, p: [f64; 2]) -> ([f64; 2], bool) {
    let (dx, dy, theta) = params.offsets(t);
    let (px, py) = params.period();
    let r = rotate(p, params.center(), theta);
    let q = [(r[0] + dx).rem_euclid(px), (r[1] + dy).rem_euclid(py)];
    // rem_euclid can round up to the period itself
    let q = [if q[0] >= px { 0.0 } else { q[0] }, if q[1] >= py { 0.0 } else { q[1] }];
    let visible = q[0] < params.width as f64 && q[1] < params.height as f64;
    (q, visible)
}

/// Inverse of [`roll_point`]. Among the torus preimages this picks the one
/// whose rotated position lies in the period-sized window centered on the
/// image center, which is the source point whenever it was inside the frame
/// and `margin <= min(W, H)`.
pub fn unroll_point(params: &RollParams, t: usize, q: [f64; 2]) -> [f64; 2] {
    let (dx, dy, theta) = params.offsets(t);
    let (px, py) = params.period();
    let c = params.center();
    let window = |z: f64, c: f64, p: f64| c + (z - c + p / 2.0).rem_euclid(p) - p / 2.0;
    let z = [window(q[0] - dx, c.0, px), window(q[1] - dy, c.1, py)];
    rotate(z, c, -theta)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resample {
    #[default]
    Nearest,
    Bilinear,
}

/// Resamples `frame` under the roll at frame `t`. Pixel `(i, j)` covers
/// `[i, i+1) x [j, j+1)` and is sampled at its center, so a point at `p`
/// lands in pixel `floor(roll_point(p))`. Pixels whose source falls in the
/// margin or outside the source frame are set to zero.
pub fn roll_frame(params: &RollParams, t: usize, frame: &Frame, resample: Resample) -> Frame {
    let (h, w, ch) = (frame.height(), frame.width(), frame.channels());
    let mut out = Frame::zeros(h, w, ch).with_dtype(frame.dtype());
    for y in 0..h {
        for x in 0..w {
            let s = unroll_point(params, t, [x as f64 + 0.5, y as f64 + 0.5]);
            match resample {
                Resample::Nearest => {
                    let (sx, sy) = (s[0].floor(), s[1].floor());
                    if sx >= 0.0 && sy >= 0.0 && sx < w as f64 && sy < h as f64 {
                        out.pixel_mut(x, y).copy_from_slice(frame.pixel(sx as usize, sy as usize));
                    }
                }
                Resample::Bilinear => {
                    let s = [s[0] - 0.5, s[1] - 0.5];
                    let (x0, y0) = (s[0].floor(), s[1].floor());
                    let (fx, fy) = (s[0] - x0, s[1] - y0);
                    let mut acc = vec![0.0f64; ch];
                    for (ox, oy, wt) in [(0.0, 0.0, (1.0 - fx) * (1.0 - fy)), (1.0, 0.0, fx * (1.0 - fy)), (0.0, 1.0, (1.0 - fx) * fy), (1.0, 1.0, fx * fy)] {
                        let (sx, sy) = (x0 + ox, y0 + oy);
                        if wt == 0.0 || sx < 0.0 || sy < 0.0 || sx >= w as f64 || sy >= h as f64 {
                            continue;
                        }
                        for (a, v) in acc.iter_mut().zip(frame.pixel(sx as usize, sy as usize)) {
                            *a += wt * f64::from(*v);
                        }
                    }
                    for (o, a) in out.pixel_mut(x, y).iter_mut().zip(acc) {
                        *o = a as f32;
                    }
                }
            }
        }
    }
    out
}

/// Rolls every frame and track point. Points in the margin keep their wrapped
/// coordinates but become invisible; queries move to the next visible frame
/// and tracks that never reappear are dropped.
pub fn apply_roll_to_trackset(
    params: &RollParams,
    frames: &[Frame],
    tracks: &TrackSet,
    resample: Resample,
) -> Result<(Vec<Frame>, TrackSet)> {
    params.validate()?;
    let v = tracks.video;
    if (v.frames, v.height, v.width) != (params.frames, params.height, params.width) {
        return Err(Error::Shape(format!(
            "roll params are {}x{}x{} but tracks are {}x{}x{}",
            params.frames, params.height, params.width, v.frames, v.height, v.width
        )));
    }
    if !frames.is_empty() {
        if frames.len() != v.frames {
            return Err(Error::Shape(format!("{} frames for a {}-frame video", frames.len(), v.frames)));
        }
        if let Some(f) = frames.iter().find(|f| (f.height(), f.width()) != (v.height, v.width)) {
            return Err(Error::Shape(format!("frame is {}x{}, video is {}x{}", f.height(), f.width(), v.height, v.width)));
        }
    }
    let out_frames = frames.iter().enumerate().map(|(t, f)| roll_frame(params, t, f, resample)).collect();
    let out_tracks = tracks
        .tracks
        .iter()
        .filter_map(|tr| {
            let mut positions = Vec::with_capacity(tr.positions.len());
            let mut visibility = Vec::with_capacity(tr.visibility.len());
            for (t, (&p, &vis)) in tr.positions.iter().zip(&tr.visibility).enumerate() {
                let (q, detectable) = roll_point(params, t, p);
                positions.push(q);
                visibility.push(vis && detectable);
            }
            requery(Track { id: tr.id, query: tr.query, positions, visibility })
        })
        .collect();
    Ok((out_frames, TrackSet { video: v, tracks: out_tracks }))
}
