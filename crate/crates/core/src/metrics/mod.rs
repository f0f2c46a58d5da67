//! Point-tracking evaluation.
//!
//! All metrics score a ground-truth [`TrackSet`] against a prediction for the
//! same video, matching tracks by id. Only frames at or after a track's query
//! frame are scored. Distances are measured after rescaling coordinates to
//! the evaluation resolution in [`EvalConfig`] (256 x 256 by default), so
//! pixel thresholds mean the same thing for every input size.
//!
//! A metric with nothing to score returns [`Error::UndefinedMetric`] rather
//! than zero.

mod loss;
mod redetect;
mod report;
mod tap;

pub use loss::{mean_abs_coordinate_error, weighted_position_loss, LossWeights};
pub use redetect::{aj_rd, aj_rd_video, find_eligible_reappearances, AjRd, AjRdEntry, ReappearanceEvent, DEFAULT_D_MINS};
pub use report::{evaluate, MetricReport, MetricRow, CSV_RATE_SCALE};
pub use tap::{average_jaccard, delta_avg, median_translation_error, occlusion_accuracy, survival_rate};

use crate::error::{Error, Result};
use crate::tracks::{Track, TrackSet};

pub const DEFAULT_THRESHOLDS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    /// Pixel thresholds at the evaluation resolution.
    pub thresholds: Vec<f64>,
    /// `(width, height)` coordinates are rescaled to; `None` keeps native pixels.
    pub eval_size: Option<(f64, f64)>,
    /// Error beyond which a track counts as lost for the survival rate.
    pub survival_threshold: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { thresholds: DEFAULT_THRESHOLDS.to_vec(), eval_size: Some((256.0, 256.0)), survival_threshold: 50.0 }
    }
}

impl EvalConfig {
    /// Evaluates in native pixel units.
    pub fn native() -> Self {
        Self { eval_size: None, ..Self::default() }
    }

    fn scale(&self, gt: &TrackSet) -> (f64, f64) {
        match self.eval_size {
            Some((w, h)) => (w / gt.video.width as f64, h / gt.video.height as f64),
            None => (1.0, 1.0),
        }
    }
}

/// Ground-truth/prediction track pairs with the distance scale of the video.
pub(crate) struct Matched<'a> {
    pub pairs: Vec<(&'a Track, &'a Track)>,
    pub frames: usize,
    scale: (f64, f64),
}

impl Matched<'_> {
    pub fn distance(&self, gt: &Track, pred: &Track, t: usize) -> f64 {
        let ([gx, gy], [px, py]) = (gt.positions[t], pred.positions[t]);
        ((gx - px) * self.scale.0).hypot((gy - py) * self.scale.1)
    }
}

pub(crate) fn match_tracks<'a>(gt: &'a TrackSet, pred: &'a TrackSet, cfg: &EvalConfig) -> Result<Matched<'a>> {
    if gt.video.frames != pred.video.frames {
        return Err(Error::TrackMismatch(format!("{} vs {} frames", gt.video.frames, pred.video.frames)));
    }
    if gt.tracks.len() != pred.tracks.len() {
        return Err(Error::TrackMismatch(format!("{} vs {} tracks", gt.tracks.len(), pred.tracks.len())));
    }
    let pairs = gt
        .tracks
        .iter()
        .map(|g| {
            pred.track(g.id)
                .map(|p| (g, p))
                .ok_or_else(|| Error::TrackMismatch(format!("prediction has no track {}", g.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    if pairs.iter().any(|(g, p)| p.positions.len() != gt.video.frames || g.positions.len() != gt.video.frames) {
        return Err(Error::TrackMismatch("track length differs from the video length".into()));
    }
    Ok(Matched { pairs, frames: gt.video.frames, scale: cfg.scale(gt) })
}

pub(crate) fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}
