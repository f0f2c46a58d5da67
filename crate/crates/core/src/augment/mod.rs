//! Geometric augmentations applied jointly to frames and tracks.

mod aspect;
mod frame;
mod roll;

pub use aspect::{aspect_crop, aspect_crop_with_ratio, AspectCropSpec, DEFAULT_ASPECT_RANGE};
pub use frame::{read_frames_dir, write_frames_dir, Frame, FrameDtype};
pub use roll::{
    apply_roll_to_trackset, roll_frame, roll_point, sample_roll_params, unroll_point, Resample, RollConfig, RollParams,
};
pub use crate::numeric::Sinusoid;

use crate::tracks::{Query, Track};

/// Moves a track's query to its first visible frame at or after the current
/// query frame. Returns `None` if the point is never visible again.
pub(crate) fn requery(mut track: Track) -> Option<Track> {
    let t = (track.query.t..track.visibility.len()).find(|&t| track.visibility[t])?;
    let [x, y] = track.positions[t];
    track.query = Query { t, x, y };
    Some(track)
}
