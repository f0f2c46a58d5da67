//! Ground-truth and predicted point tracks, and their JSON file format.
//!
//! File layout (version `"1"`):
//!
//! ```json
//! {
//!   "version": "1",
//!   "video": { "frames": 3, "height": 256, "width": 256 },
//!   "tracks": [
//!     { "id": 0, "query": { "t": 0, "x": 10.0, "y": 20.0 },
//!       "positions": [[10.0, 20.0], [11.0, 20.5], [12.0, 21.0]],
//!       "visibility": [1, 1, 0] }
//!   ]
//! }
//! ```
//!
//! Positions are pixel coordinates `(x, y)` with `x` along the width.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRACK_FILE_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VideoDims {
    pub frames: usize,
    pub height: usize,
    pub width: usize,
}

impl VideoDims {
    pub fn contains(&self, [x, y]: [f64; 2]) -> bool {
        x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64
    }
}

/// The `(t, x, y)` point a track is initialised from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub t: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    pub id: u64,
    pub query: Query,
    pub positions: Vec<[f64; 2]>,
    pub visibility: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackSet {
    pub video: VideoDims,
    pub tracks: Vec<Track>,
}

#[derive(Serialize, Deserialize)]
struct TrackFile {
    version: String,
    video: VideoDims,
    tracks: Vec<TrackRecord>,
}

#[derive(Serialize, Deserialize)]
struct TrackRecord {
    id: u64,
    query: Query,
    positions: Vec<[f64; 2]>,
    visibility: Vec<u8>,
}

impl TrackSet {
    pub fn new(video: VideoDims, tracks: Vec<Track>) -> Result<Self> {
        let set = Self { video, tracks };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.video;
        if v.frames == 0 || v.height == 0 || v.width == 0 {
            return Err(Error::Schema(format!("video dims must be positive, got {v:?}")));
        }
        let mut seen = HashSet::new();
        for tr in &self.tracks {
            if !seen.insert(tr.id) {
                return Err(Error::Schema(format!("duplicate track id {}", tr.id)));
            }
            if tr.positions.len() != v.frames || tr.visibility.len() != v.frames {
                return Err(Error::Schema(format!("track {}: expected {} frames", tr.id, v.frames)));
            }
            if tr.positions.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::Schema(format!("track {}: non-finite position", tr.id)));
            }
            let q = tr.query;
            if q.t >= v.frames || !q.x.is_finite() || !q.y.is_finite() || !v.contains([q.x, q.y]) {
                return Err(Error::Schema(format!("track {}: query {q:?} outside the video", tr.id)));
            }
        }
        Ok(())
    }

    pub fn track(&self, id: u64) -> Option<&Track> {
        self.tracks.iter().find(|t| t.id == id)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TrackFile = serde_json::from_str(s)?;
        if file.version != TRACK_FILE_VERSION {
            return Err(Error::Schema(format!("unsupported version {:?}, expected {TRACK_FILE_VERSION:?}", file.version)));
        }
        let tracks = file
            .tracks
            .into_iter()
            .map(|r| {
                let visibility = r
                    .visibility
                    .iter()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::Schema(format!("track {}: visibility value {other}", r.id))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Track { id: r.id, query: r.query, positions: r.positions, visibility })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.video, tracks)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = TrackFile {
            version: TRACK_FILE_VERSION.to_string(),
            video: self.video,
            tracks: self
                .tracks
                .iter()
                .map(|t| TrackRecord {
                    id: t.id,
                    query: t.query,
                    positions: t.positions.clone(),
                    visibility: t.visibility.iter().map(|&v| v as u8).collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_string()? + "\n")?;
        Ok(())
    }
}
