use serde::{Deserialize, Serialize};

use super::tap::{jaccard_counts, mean_jaccard, undefined};
use super::{match_tracks, mean, EvalConfig};
use crate::error::Result;
use crate::tracks::TrackSet;

pub const DEFAULT_D_MINS: [usize; 5] = [1, 4, 16, 64, 256];

/// A frame where a point is visible again after `duration` invisible frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReappearanceEvent {
    pub track_id: u64,
    pub frame: usize,
    pub duration: usize,
    /// Whether `duration` is a new record for this track.
    pub eligible: bool,
}

/// All reappearance events of one ground-truth track after its query frame.
///
/// Invisible runs are counted from the query frame on, so a run that is
/// already in progress at the query frame only contributes its scored part.
/// An event is eligible when its duration strictly exceeds every earlier
/// event's duration on the same track; the first event always is.
pub fn find_eligible_reappearances(track_id: u64, visibility: &[bool], query_t: usize) -> Vec<ReappearanceEvent> {
    let mut events = Vec::new();
    let (mut run, mut record) = (0usize, 0usize);
    for (frame, &visible) in visibility.iter().enumerate().skip(query_t) {
        if !visible {
            run += 1;
            continue;
        }
        if run > 0 {
            let eligible = run > record;
            record = record.max(run);
            events.push(ReappearanceEvent { track_id, frame, duration: run, eligible });
        }
        run = 0;
    }
    events
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AjRdEntry {
    pub d_min: usize,
    /// `None` when no video had a qualifying event.
    pub value: Option<f64>,
    /// Eligible events with `duration >= d_min`.
    pub events: usize,
    /// Videos that contributed to `value`.
    pub videos: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AjRd {
    pub per_d_min: Vec<AjRdEntry>,
    /// Mean over the defined entries of `per_d_min`.
    pub mean: f64,
}

/// Re-detection AJ of one video for every `d_min`.
///
/// For each `d_min`, every track with an eligible event of duration at least
/// `d_min` contributes its frames from the earliest such event to the end of
/// the video; AJ is computed over the union of those segments.
pub fn aj_rd_video(gt: &TrackSet, pred: &TrackSet, d_mins: &[usize], cfg: &EvalConfig) -> Result<Vec<AjRdEntry>> {
    let m = match_tracks(gt, pred, cfg)?;
    let events: Vec<Vec<ReappearanceEvent>> = m
        .pairs
        .iter()
        .map(|(g, _)| find_eligible_reappearances(g.id, &g.visibility, g.query.t).into_iter().filter(|e| e.eligible).collect())
        .collect();
    Ok(d_mins
        .iter()
        .map(|&d_min| {
            let starts: Vec<Option<usize>> = events
                .iter()
                .map(|evs| evs.iter().filter(|e| e.duration >= d_min).map(|e| e.frame).min())
                .collect();
            let count = events.iter().flatten().filter(|e| e.duration >= d_min).count();
            let value = if count == 0 {
                None
            } else {
                mean_jaccard(&jaccard_counts(&m, &cfg.thresholds, |i, t| starts[i].is_some_and(|s| t >= s)))
            };
            AjRdEntry { d_min, value, events: count, videos: usize::from(value.is_some()) }
        })
        .collect())
}

/// Dataset-level re-detection AJ.
///
/// Each `d_min` value is the unweighted mean over the videos that have at
/// least one qualifying event; videos without one are skipped for that
/// `d_min`. The summary is the mean over `d_min` values that are defined.
pub fn aj_rd(videos: &[(&TrackSet, &TrackSet)], d_mins: &[usize], cfg: &EvalConfig) -> Result<AjRd> {
    let per_video = videos
        .iter()
        .map(|(gt, pred)| aj_rd_video(gt, pred, d_mins, cfg))
        .collect::<Result<Vec<_>>>()?;
    let per_d_min: Vec<AjRdEntry> = d_mins
        .iter()
        .enumerate()
        .map(|(k, &d_min)| {
            let entries = per_video.iter().map(|v| &v[k]);
            let values: Vec<f64> = entries.clone().filter_map(|e| e.value).collect();
            AjRdEntry { d_min, value: mean(values.iter().copied()), events: entries.map(|e| e.events).sum(), videos: values.len() }
        })
        .collect();
    let mean = mean(per_d_min.iter().filter_map(|e| e.value)).ok_or_else(|| undefined("aj_rd", "no qualifying reappearance events"))?;
    Ok(AjRd { per_d_min, mean })
}
