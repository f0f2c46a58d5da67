use crate::error::{Error, Result};
use crate::tracks::TrackSet;

/// Per-pair weights of the position loss, keyed on ground-truth state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossWeights {
    pub visible: f64,
    /// Occluded, but the ground-truth position is inside the image.
    pub occluded_in_frame: f64,
    pub out_of_frame: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self { visible: 1.0, occluded_in_frame: 0.2, out_of_frame: 0.0 }
    }
}

/// Mean absolute coordinate error of one point, `(|dx| + |dy|) / 2`.
pub fn mean_abs_coordinate_error(gt: [f64; 2], pred: [f64; 2]) -> f64 {
    0.5 * ((gt[0] - pred[0]).abs() + (gt[1] - pred[1]).abs())
}

/// Weighted mean of `base_loss` over scored pairs, normalised by the total
/// weight. Positions are compared in native pixels.
pub fn weighted_position_loss(
    gt: &TrackSet,
    pred: &TrackSet,
    weights: &LossWeights,
    base_loss: impl Fn([f64; 2], [f64; 2]) -> f64,
) -> Result<f64> {
    if [weights.visible, weights.occluded_in_frame, weights.out_of_frame].iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(Error::InvalidArgument("loss weights must be non-negative".into()));
    }
    let m = super::match_tracks(gt, pred, &super::EvalConfig::native())?;
    let (mut total, mut mass) = (0.0, 0.0);
    for (g, p) in &m.pairs {
        for t in g.query.t..m.frames {
            let w = if g.visibility[t] {
                weights.visible
            } else if gt.video.contains(g.positions[t]) {
                weights.occluded_in_frame
            } else {
                weights.out_of_frame
            };
            if w > 0.0 {
                total += w * base_loss(g.positions[t], p.positions[t]);
                mass += w;
            }
        }
    }
    if mass == 0.0 {
        return Err(Error::UndefinedLoss);
    }
    Ok(total / mass)
}
