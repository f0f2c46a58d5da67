use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::redetect::{aj_rd_video, AjRdEntry};
use super::tap::{average_jaccard, delta_avg, median_translation_error, occlusion_accuracy, survival_rate};
use super::{mean, EvalConfig};
use crate::error::{Error, Result};
use crate::tracks::TrackSet;

/// Rate metrics are written to CSV as percentages.
pub const CSV_RATE_SCALE: f64 = 100.0;

/// Metrics of one video, or their aggregate. `None` marks an undefined value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub video: String,
    pub aj: Option<f64>,
    pub delta_avg: Option<f64>,
    pub occlusion_accuracy: Option<f64>,
    pub survival: Option<f64>,
    /// Median translation error in evaluation-resolution pixels.
    pub mte: Option<f64>,
    pub aj_rd: Vec<AjRdEntry>,
    pub aj_rd_mean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub thresholds: Vec<f64>,
    pub eval_size: Option<(f64, f64)>,
    pub survival_threshold: f64,
    pub d_mins: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub config: ReportConfig,
    pub videos: Vec<MetricRow>,
    pub aggregate: MetricRow,
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedMetric { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn evaluate_video(name: &str, gt: &TrackSet, pred: &TrackSet, d_mins: &[usize], cfg: &EvalConfig) -> Result<MetricRow> {
    let aj_rd = aj_rd_video(gt, pred, d_mins, cfg)?;
    let aj_rd_mean = mean(aj_rd.iter().filter_map(|e| e.value));
    Ok(MetricRow {
        video: name.to_string(),
        aj: defined(average_jaccard(gt, pred, cfg))?,
        delta_avg: defined(delta_avg(gt, pred, cfg))?,
        occlusion_accuracy: defined(occlusion_accuracy(gt, pred, cfg))?,
        survival: defined(survival_rate(gt, pred, cfg))?,
        mte: defined(median_translation_error(gt, pred, cfg))?,
        aj_rd,
        aj_rd_mean,
    })
}

/// Evaluates named `(gt, pred)` video pairs. Aggregates are unweighted means
/// over the videos where each metric is defined.
pub fn evaluate(videos: &[(String, &TrackSet, &TrackSet)], d_mins: &[usize], cfg: &EvalConfig) -> Result<MetricReport> {
    let rows = videos
        .iter()
        .map(|(name, gt, pred)| evaluate_video(name, gt, pred, d_mins, cfg))
        .collect::<Result<Vec<_>>>()?;
    let avg = |f: fn(&MetricRow) -> Option<f64>| mean(rows.iter().filter_map(f));
    let aj_rd: Vec<AjRdEntry> = d_mins
        .iter()
        .enumerate()
        .map(|(k, &d_min)| {
            let values: Vec<f64> = rows.iter().filter_map(|r| r.aj_rd[k].value).collect();
            AjRdEntry {
                d_min,
                value: mean(values.iter().copied()),
                events: rows.iter().map(|r| r.aj_rd[k].events).sum(),
                videos: values.len(),
            }
        })
        .collect();
    let aggregate = MetricRow {
        video: "aggregate".into(),
        aj: avg(|r| r.aj),
        delta_avg: avg(|r| r.delta_avg),
        occlusion_accuracy: avg(|r| r.occlusion_accuracy),
        survival: avg(|r| r.survival),
        mte: avg(|r| r.mte),
        aj_rd_mean: mean(aj_rd.iter().filter_map(|e| e.value)),
        aj_rd,
    };
    let config = ReportConfig {
        thresholds: cfg.thresholds.clone(),
        eval_size: cfg.eval_size,
        survival_threshold: cfg.survival_threshold,
        d_mins: d_mins.to_vec(),
    };
    Ok(MetricReport { config, videos: rows, aggregate })
}

impl MetricReport {
    /// Flat CSV: one row per video then an `aggregate` row.
    ///
    /// Columns: `video, aj, delta_avg, oa, survival, mte, aj_rd_<d>...,
    /// aj_rd, events_<d>...`. Rates are percentages, MTE is in pixels,
    /// undefined values are empty cells.
    pub fn to_csv(&self) -> String {
        let d_mins = &self.config.d_mins;
        let mut out = String::from("video,aj,delta_avg,oa,survival,mte");
        for d in d_mins {
            let _ = write!(out, ",aj_rd_{d}");
        }
        out.push_str(",aj_rd");
        for d in d_mins {
            let _ = write!(out, ",events_{d}");
        }
        out.push('\n');
        for row in self.videos.iter().chain(std::iter::once(&self.aggregate)) {
            out.push_str(&csv_field(&row.video));
            let rate = |v: Option<f64>| v.map(|v| v * CSV_RATE_SCALE);
            for v in [rate(row.aj), rate(row.delta_avg), rate(row.occlusion_accuracy), rate(row.survival), row.mte] {
                out.push(',');
                out.push_str(&cell(v));
            }
            for e in &row.aj_rd {
                out.push(',');
                out.push_str(&cell(rate(e.value)));
            }
            out.push(',');
            out.push_str(&cell(rate(row.aj_rd_mean)));
            for e in &row.aj_rd {
                let _ = write!(out, ",{}", e.events);
            }
            out.push('\n');
        }
        out
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
