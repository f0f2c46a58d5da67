//! Recurrent-state inspection: hidden-state norm trajectories and
//! histograms of decay values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::{sequential_scan, ScanSequence};

/// Decay factors fed to the recurrence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    Constant(Vec<f64>),
    PerStep(Vec<Vec<f64>>),
}

/// `norms[i]` is the L2 norm of the state after step `i + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTrajectory {
    pub norms: Vec<f64>,
}

impl NormTrajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,norm\n");
        for (i, n) in self.norms.iter().enumerate() {
            out.push_str(&format!("{},{n}\n", i + 1));
        }
        out
    }
}

/// Feeds the constant input `x` for `frames` steps starting from `h0`.
pub fn state_norm_trajectory(a: &Decay, x: &[f64], h0: &[f64], frames: usize) -> Result<NormTrajectory> {
    if frames == 0 {
        return Err(Error::InvalidArgument("trajectory needs at least one frame".into()));
    }
    let rows = match a {
        Decay::Constant(a) => vec![a.clone(); frames],
        Decay::PerStep(rows) if rows.len() == frames => rows.clone(),
        Decay::PerStep(rows) => return Err(Error::Shape(format!("{} decay rows for {frames} frames", rows.len()))),
    };
    let seq = ScanSequence::from_rows(rows, vec![x.to_vec(); frames], h0.to_vec())?;
    Ok(NormTrajectory { norms: sequential_scan(&seq).iter().map(|h| h.l2_norm()).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenHistogram {
    /// `bins + 1` edges spanning `[0, 1]`.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl EigenHistogram {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{c}\n", self.edges[i], self.edges[i + 1]));
        }
        out
    }
}

/// Equal-width bins over `[0, 1]`, half-open except the last. Values outside
/// the range are counted in the nearest edge bin.
pub fn eigenvalue_histogram(values: &[f64], bins: usize) -> Result<EigenHistogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("cannot bin NaN".into()));
    }
    let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let i = (v.clamp(0.0, 1.0) * bins as f64).floor() as usize;
        counts[i.min(bins - 1)] += 1;
    }
    Ok(EigenHistogram { edges, counts })
}
