use super::{match_tracks, mean, EvalConfig, Matched};
use crate::error::{Error, Result};
use crate::tracks::TrackSet;

/// Per-threshold true positive / false positive / ground-truth positive
/// counts over the selected (track, frame) pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct JaccardCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub gt_pos: usize,
}

impl JaccardCounts {
    /// `TP / (TP + FP + FN)` with `FN = gt_pos - TP`.
    pub fn jaccard(&self) -> Option<f64> {
        let denom = self.gt_pos + self.false_pos;
        (denom > 0).then(|| self.true_pos as f64 / denom as f64)
    }
}

/// Jaccard counts for every threshold over pairs accepted by `keep(track, t)`.
pub(crate) fn jaccard_counts(m: &Matched<'_>, thresholds: &[f64], keep: impl Fn(usize, usize) -> bool) -> Vec<JaccardCounts> {
    let mut counts = vec![JaccardCounts::default(); thresholds.len()];
    for (i, (gt, pred)) in m.pairs.iter().enumerate() {
        for t in gt.query.t..m.frames {
            if !keep(i, t) {
                continue;
            }
            let (gv, pv) = (gt.visibility[t], pred.visibility[t]);
            let dist = m.distance(gt, pred, t);
            for (c, &thr) in counts.iter_mut().zip(thresholds) {
                let within = dist <= thr;
                c.gt_pos += usize::from(gv);
                c.true_pos += usize::from(gv && pv && within);
                // A visible prediction that is wrong, or that marks an occluded point.
                c.false_pos += usize::from(pv && (!gv || !within));
            }
        }
    }
    counts
}

pub(crate) fn mean_jaccard(counts: &[JaccardCounts]) -> Option<f64> {
    counts.iter().map(JaccardCounts::jaccard).collect::<Option<Vec<_>>>().and_then(mean)
}

/// Mean over thresholds of the fraction of visible ground-truth points
/// predicted within the threshold. Predicted visibility is ignored.
pub fn delta_avg(gt: &TrackSet, pred: &TrackSet, cfg: &EvalConfig) -> Result<f64> {
    let m = match_tracks(gt, pred, cfg)?;
    let mut within = vec![0usize; cfg.thresholds.len()];
    let mut scored = 0usize;
    for (g, p) in &m.pairs {
        for t in g.query.t..m.frames {
            if !g.visibility[t] {
                continue;
            }
            scored += 1;
            let dist = m.distance(g, p, t);
            for (w, &thr) in within.iter_mut().zip(&cfg.thresholds) {
                *w += usize::from(dist <= thr);
            }
        }
    }
    if scored == 0 {
        return Err(undefined("delta_avg", "no visible ground-truth points"));
    }
    mean(within.iter().map(|&w| w as f64 / scored as f64)).ok_or_else(|| undefined("delta_avg", "no thresholds"))
}

/// Fraction of scored pairs whose predicted visibility equals the ground truth.
pub fn occlusion_accuracy(gt: &TrackSet, pred: &TrackSet, cfg: &EvalConfig) -> Result<f64> {
    let m = match_tracks(gt, pred, cfg)?;
    let (mut agree, mut scored) = (0usize, 0usize);
    for (g, p) in &m.pairs {
        for t in g.query.t..m.frames {
            scored += 1;
            agree += usize::from(g.visibility[t] == p.visibility[t]);
        }
    }
    if scored == 0 {
        return Err(undefined("occlusion_accuracy", "no scored frames"));
    }
    Ok(agree as f64 / scored as f64)
}

/// Average Jaccard: per threshold `TP / (TP + FP + FN)`, averaged.
///
/// A visible prediction beyond the threshold on a visible ground-truth point
/// is both a false positive and a false negative.
pub fn average_jaccard(gt: &TrackSet, pred: &TrackSet, cfg: &EvalConfig) -> Result<f64> {
    let m = match_tracks(gt, pred, cfg)?;
    mean_jaccard(&jaccard_counts(&m, &cfg.thresholds, |_, _| true))
        .ok_or_else(|| undefined("average_jaccard", "no visible points in ground truth or prediction"))
}

/// Mean over tracks of the fraction of the scored span survived before the
/// first failure. A failure is a visible ground-truth frame whose error
/// exceeds `cfg.survival_threshold`.
pub fn survival_rate(gt: &TrackSet, pred: &TrackSet, cfg: &EvalConfig) -> Result<f64> {
    let m = match_tracks(gt, pred, cfg)?;
    mean(m.pairs.iter().map(|(g, p)| {
        let q = g.query.t;
        let fail = (q..m.frames).find(|&t| g.visibility[t] && m.distance(g, p, t) > cfg.survival_threshold);
        match fail {
            Some(t) => (t - q) as f64 / (m.frames - q) as f64,
            None => 1.0,
        }
    }))
    .ok_or_else(|| undefined("survival_rate", "no tracks"))
}

/// Median position error over visible ground-truth frames (midpoint of the
/// two central values for an even count).
pub fn median_translation_error(gt: &TrackSet, pred: &TrackSet, cfg: &EvalConfig) -> Result<f64> {
    let m = match_tracks(gt, pred, cfg)?;
    let mut errors: Vec<f64> = m
        .pairs
        .iter()
        .flat_map(|(g, p)| (g.query.t..m.frames).filter(|&t| g.visibility[t]).map(|t| m.distance(g, p, t)))
        .collect();
    if errors.is_empty() {
        return Err(undefined("median_translation_error", "no visible ground-truth points"));
    }
    errors.sort_by(f64::total_cmp);
    let n = errors.len();
    Ok(if n % 2 == 1 { errors[n / 2] } else { 0.5 * (errors[n / 2 - 1] + errors[n / 2]) })
}

pub(crate) fn undefined(metric: &'static str, reason: &'static str) -> Error {
    Error::UndefinedMetric { metric, reason }
}
