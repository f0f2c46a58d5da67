//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use tapscan::scan::{causal_conv_forward, sequential_scan, ConvKernel};
use tapscan::tracks::{Query, Track, TrackSet, VideoDims};
use tapscan::ScanSequence;

pub const THRESHOLDS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

pub fn rows(rng: &mut impl Rng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(lo..hi)).collect()).collect()
}

pub fn random_sequence(rng: &mut impl Rng, frames: usize, dim: usize) -> ScanSequence {
    let a = rows(rng, frames, dim, 0.0, 1.0);
    let x = rows(rng, frames, dim, -1.0, 1.0);
    let h0 = rows(rng, 1, dim, -1.0, 1.0).remove(0);
    ScanSequence::from_rows(a, x, h0).unwrap()
}

pub fn split(seq: &ScanSequence) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
    let a = seq.elements().iter().map(|e| e.a().to_vec()).collect();
    let x = seq.elements().iter().map(|e| e.x().to_vec()).collect();
    (a, x, seq.h0().0.clone())
}

/// Plain left-to-right loop, independent of the library kernels.
pub fn naive_scan(a: &[Vec<f64>], x: &[Vec<f64>], h0: &[f64]) -> Vec<Vec<f64>> {
    let mut h = h0.to_vec();
    let mut out = Vec::with_capacity(a.len());
    for (a, x) in a.iter().zip(x) {
        for i in 0..h.len() {
            h[i] = a[i] * h[i] + x[i];
        }
        out.push(h.clone());
    }
    out
}

pub struct NaiveGrads {
    pub grad_a: Vec<Vec<f64>>,
    pub grad_x: Vec<Vec<f64>>,
    pub grad_h0: Vec<f64>,
}

/// Reverse-mode chain rule written out step by step.
pub fn naive_backward(a: &[Vec<f64>], h: &[Vec<f64>], h0: &[f64], grad_h: &[Vec<f64>]) -> NaiveGrads {
    let (n, d) = (a.len(), h0.len());
    let mut g = vec![0.0; d];
    let mut grad_a = vec![vec![0.0; d]; n];
    let mut grad_x = vec![vec![0.0; d]; n];
    for t in (0..n).rev() {
        for i in 0..d {
            g[i] = grad_h[t][i] + if t + 1 < n { a[t + 1][i] * g[i] } else { 0.0 };
        }
        let prev = if t == 0 { h0 } else { &h[t - 1] };
        for i in 0..d {
            grad_x[t][i] = g[i];
            grad_a[t][i] = g[i] * prev[i];
        }
    }
    let grad_h0 = if n == 0 { vec![0.0; d] } else { (0..d).map(|i| a[0][i] * g[i]).collect() };
    NaiveGrads { grad_a, grad_x, grad_h0 }
}

fn dot_rows(w: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    w.iter().zip(y).flat_map(|(w, y)| w.iter().zip(y).map(|(a, b)| a * b)).sum()
}

/// Central difference of `f` with respect to every entry of `params`.
pub fn central_diff(params: &mut [Vec<f64>], step: f64, mut f: impl FnMut(&[Vec<f64>]) -> f64) -> Vec<Vec<f64>> {
    let mut out = vec![];
    for r in 0..params.len() {
        let mut row = vec![];
        for c in 0..params[r].len() {
            let orig = params[r][c];
            params[r][c] = orig + step;
            let up = f(params);
            params[r][c] = orig - step;
            let down = f(params);
            params[r][c] = orig;
            row.push((up - down) / (2.0 * step));
        }
        out.push(row);
    }
    out
}

/// Finite-difference gradients of `sum_t <w_t, h_t>` with respect to `a`, `x` and `h0`.
pub fn scan_fd(seq: &ScanSequence, w: &[Vec<f64>], step: f64) -> NaiveGrads {
    let (mut a, mut x, h0) = split(seq);
    let loss = |a: &[Vec<f64>], x: &[Vec<f64>], h0: &[f64]| {
        let s = ScanSequence::from_rows(a.to_vec(), x.to_vec(), h0.to_vec()).unwrap();
        let h: Vec<Vec<f64>> = sequential_scan(&s).into_iter().map(|h| h.0).collect();
        dot_rows(w, &h)
    };
    let grad_a = central_diff(&mut a, step, |a| loss(a, &x, &h0));
    let grad_x = central_diff(&mut x, step, |x| loss(&a, x, &h0));
    let mut h0m = vec![h0.clone()];
    let grad_h0 = central_diff(&mut h0m, step, |h| loss(&a, &x, &h[0])).remove(0);
    NaiveGrads { grad_a, grad_x, grad_h0 }
}

pub struct ConvFd {
    pub grad_w: Vec<Vec<f64>>,
    pub grad_u: Vec<Vec<f64>>,
    pub grad_pad: Vec<Vec<f64>>,
}

/// Finite-difference gradients of `sum_t <g_t, conv(u)_t>`.
pub fn conv_fd(weights: &[Vec<f64>], u: &[Vec<f64>], pad: &[Vec<f64>], g: &[Vec<f64>], step: f64) -> ConvFd {
    let loss = |w: &[Vec<f64>], u: &[Vec<f64>], p: &[Vec<f64>]| {
        let k = ConvKernel::new(w.to_vec()).unwrap();
        dot_rows(g, &causal_conv_forward(&k, u, Some(p)).unwrap())
    };
    let (mut w, mut uu, mut pp) = (weights.to_vec(), u.to_vec(), pad.to_vec());
    let grad_w = central_diff(&mut w, step, |w| loss(w, u, pad));
    let grad_u = central_diff(&mut uu, step, |u| loss(weights, u, pad));
    let grad_pad = central_diff(&mut pp, step, |p| loss(weights, u, p));
    ConvFd { grad_w, grad_u, grad_pad }
}

// ---- tracks ----

/// A random ground truth / prediction pair with long visibility runs.
pub fn random_tracks(rng: &mut impl Rng, frames: usize, n_tracks: usize) -> (TrackSet, TrackSet) {
    let (h, w) = (rng.gen_range(16..80usize), rng.gen_range(16..80usize));
    let video = VideoDims { frames, height: h, width: w };
    let mut gt = vec![];
    let mut pred = vec![];
    for i in 0..n_tracks {
        let mut vis = Vec::with_capacity(frames);
        let mut state = rng.gen_bool(0.7);
        for _ in 0..frames {
            if rng.gen_bool(0.2) {
                state = !state;
            }
            vis.push(state);
        }
        let q = rng.gen_range(0..frames);
        vis[q] = true;
        let pos: Vec<[f64; 2]> = (0..frames).map(|_| [rng.gen_range(0.0..w as f64), rng.gen_range(0.0..h as f64)]).collect();
        let noise = rng.gen_range(0.0..6.0);
        let ppos = pos.iter().map(|p| [p[0] + rng.gen_range(-noise..=noise), p[1] + rng.gen_range(-noise..=noise)]).collect();
        let pvis = vis.iter().map(|&v| if rng.gen_bool(0.15) { !v } else { v }).collect();
        let id = (n_tracks - i) as u64 * 7;
        let query = Query { t: q, x: pos[q][0], y: pos[q][1] };
        gt.push(Track { id, query, positions: pos, visibility: vis });
        pred.push(Track { id, query, positions: ppos, visibility: pvis });
    }
    pred.reverse();
    (TrackSet::new(video, gt).unwrap(), TrackSet::new(video, pred).unwrap())
}

fn dist(gt: &TrackSet, g: &Track, p: &Track, t: usize) -> f64 {
    let (sx, sy) = (256.0 / gt.video.width as f64, 256.0 / gt.video.height as f64);
    let dx = (g.positions[t][0] - p.positions[t][0]) * sx;
    let dy = (g.positions[t][1] - p.positions[t][1]) * sy;
    (dx * dx + dy * dy).sqrt()
}

fn partner<'a>(pred: &'a TrackSet, g: &Track) -> &'a Track {
    pred.tracks.iter().find(|p| p.id == g.id).unwrap()
}

/// AJ over the pairs selected by `mask(track index, t)`, `None` when undefined.
pub fn brute_aj(gt: &TrackSet, pred: &TrackSet, mask: impl Fn(usize, usize) -> bool) -> Option<f64> {
    let mut per_thr = vec![];
    for &thr in &THRESHOLDS {
        let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
        for (i, g) in gt.tracks.iter().enumerate() {
            let p = partner(pred, g);
            for t in 0..gt.video.frames {
                if t < g.query.t || !mask(i, t) {
                    continue;
                }
                let close = dist(gt, g, p, t) <= thr;
                let (gv, pv) = (g.visibility[t], p.visibility[t]);
                if gv && pv && close {
                    tp += 1;
                }
                if pv && !(gv && close) {
                    fp += 1;
                }
                if gv && !(pv && close) {
                    fn_ += 1;
                }
            }
        }
        let denom = tp + fp + fn_;
        if denom == 0 {
            return None;
        }
        per_thr.push(tp as f64 / denom as f64);
    }
    Some(per_thr.iter().sum::<f64>() / per_thr.len() as f64)
}

pub fn brute_survival(gt: &TrackSet, pred: &TrackSet, threshold: f64) -> f64 {
    let mut total = 0.0;
    for g in &gt.tracks {
        let p = partner(pred, g);
        let span = gt.video.frames - g.query.t;
        let mut survived = span;
        for t in g.query.t..gt.video.frames {
            if g.visibility[t] && dist(gt, g, p, t) > threshold {
                survived = t - g.query.t;
                break;
            }
        }
        total += survived as f64 / span as f64;
    }
    total / gt.tracks.len() as f64
}

/// `(frame, duration)` of every eligible reappearance, found by looking back
/// from each frame.
pub fn brute_events(vis: &[bool], query_t: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = vec![];
    let mut all: Vec<usize> = vec![];
    for t in query_t + 1..vis.len() {
        if !vis[t] || vis[t - 1] {
            continue;
        }
        let mut start = t;
        while start > query_t && !vis[start - 1] {
            start -= 1;
        }
        let d = t - start;
        if all.iter().all(|&prev| d > prev) {
            out.push((t, d));
        }
        all.push(d);
    }
    out
}

/// Per-`d_min` AJ_RD over videos (skipping videos without events) and the
/// mean over defined entries.
pub fn brute_aj_rd(videos: &[(TrackSet, TrackSet)], d_mins: &[usize]) -> (Vec<Option<f64>>, Option<f64>) {
    let per: Vec<Option<f64>> = d_mins
        .iter()
        .map(|&d_min| {
            let vals: Vec<f64> = videos
                .iter()
                .filter_map(|(gt, pred)| {
                    let starts: Vec<Option<usize>> = gt
                        .tracks
                        .iter()
                        .map(|g| brute_events(&g.visibility, g.query.t).into_iter().filter(|e| e.1 >= d_min).map(|e| e.0).min())
                        .collect();
                    if starts.iter().all(Option::is_none) {
                        return None;
                    }
                    brute_aj(gt, pred, |i, t| starts[i].is_some_and(|s| t >= s))
                })
                .collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();
    let defined: Vec<f64> = per.iter().flatten().copied().collect();
    let mean = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    (per, mean)
}
