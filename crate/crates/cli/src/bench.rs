use std::time::Instant;

use anyhow::{ensure, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tapscan::dist::{distributed_conv_forward, distributed_scan_backward, distributed_scan_forward, Topology};
use tapscan::numeric::{ceil_log2, max_rel_err};
use tapscan::scan::{
    causal_conv_backward, causal_conv_forward, fd_conv_gradients, fd_scan_gradients, parallel_scan, scan_backward,
    sequential_scan, ConvKernel,
};
use tapscan::{HiddenState, ScanSequence};

use crate::{print_json, Status};

const SCAN_TOLERANCE: f64 = 1e-10;
const GRAD_TOLERANCE: f64 = 1e-5;

#[derive(Args)]
pub struct ScanBenchArgs {
    #[arg(long)]
    frames: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    workers: usize,
    /// Also run the halo-exchange convolution with this kernel length.
    #[arg(long)]
    conv: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
pub struct GradCheckArgs {
    #[arg(long)]
    frames: usize,
    #[arg(long)]
    dim: usize,
    /// Also check the distributed backward pass on this many workers.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
}

fn rows(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(lo..hi)).collect()).collect()
}

fn random_sequence(rng: &mut ChaCha8Rng, frames: usize, dim: usize) -> Result<ScanSequence> {
    ensure!(frames >= 1 && dim >= 1, "--frames and --dim must be at least 1");
    let a = rows(rng, frames, dim, 0.0, 1.0);
    let x = rows(rng, frames, dim, -1.0, 1.0);
    let h0 = rows(rng, 1, dim, -1.0, 1.0).remove(0);
    Ok(ScanSequence::from_rows(a, x, h0)?)
}

fn plain(h: &[HiddenState]) -> Vec<Vec<f64>> {
    h.iter().map(|h| h.0.clone()).collect()
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn scan_bench(args: &ScanBenchArgs) -> Result<Status> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let seq = random_sequence(&mut rng, args.frames, args.dim)?;
    let topology = Topology::new(args.workers)?;

    let t = Instant::now();
    let oracle = plain(&sequential_scan(&seq));
    let oracle_ms = millis(t);
    let t = Instant::now();
    let tree = plain(&parallel_scan(&seq));
    let parallel_ms = millis(t);
    let t = Instant::now();
    let fwd = distributed_scan_forward(&seq, &topology)?;
    let forward_ms = millis(t);

    let grad_h = rows(&mut rng, args.frames, args.dim, -1.0, 1.0);
    let reference = scan_backward(&seq, &fwd.states, &grad_h)?;
    let t = Instant::now();
    let bwd = distributed_scan_backward(&seq, &fwd.states, &grad_h, &topology)?;
    let backward_ms = millis(t);

    let forward_err = max_rel_err(&plain(&fwd.states), &oracle);
    let parallel_err = max_rel_err(&tree, &oracle);
    let backward_err = max_rel_err(&bwd.grads.grad_a, &reference.grad_a)
        .max(max_rel_err(&bwd.grads.grad_x, &reference.grad_x))
        .max(max_rel_err(std::slice::from_ref(&bwd.grads.grad_h0), std::slice::from_ref(&reference.grad_h0)));
    let longest = fwd.compositions.iter().copied().max().unwrap_or(0);
    let bound = 2 * args.frames.div_ceil(args.workers) + ceil_log2(args.workers);
    let mut pass = forward_err <= SCAN_TOLERANCE && parallel_err <= SCAN_TOLERANCE && backward_err <= SCAN_TOLERANCE && longest <= bound;

    let conv = match args.conv {
        None => serde_json::Value::Null,
        Some(k) => {
            ensure!(k >= 1, "--conv must be at least 1");
            let kernel = ConvKernel::new(rows(&mut rng, k, args.dim, -1.0, 1.0))?;
            let u = rows(&mut rng, args.frames, args.dim, -1.0, 1.0);
            let want = causal_conv_forward(&kernel, &u, None)?;
            let t = Instant::now();
            let (got, comm) = distributed_conv_forward(&kernel, &u, &topology)?;
            let ms = millis(t);
            let err = max_rel_err(&got, &want);
            pass &= err <= SCAN_TOLERANCE;
            json!({ "kernel": k, "max_rel_err": err, "comm": comm, "wall_ms": ms })
        }
    };

    print_json(&json!({
        "frames": args.frames,
        "dim": args.dim,
        "workers": args.workers,
        "seed": args.seed,
        "tolerance": SCAN_TOLERANCE,
        "forward": { "max_rel_err": forward_err, "comm": fwd.comm },
        "parallel_scan": { "max_rel_err": parallel_err },
        "backward": { "max_rel_err": backward_err, "comm": bwd.comm },
        "critical_path": { "compositions": fwd.compositions, "max": longest, "bound": bound },
        "conv": conv,
        "wall_ms": { "sequential": oracle_ms, "parallel": parallel_ms, "distributed_forward": forward_ms, "distributed_backward": backward_ms },
        "pass": pass,
    }))?;
    Ok(if pass { Status::Ok } else { Status::CheckFailed })
}

pub fn grad_check(args: &GradCheckArgs) -> Result<Status> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let seq = random_sequence(&mut rng, args.frames, args.dim)?;
    let grad_h = rows(&mut rng, args.frames, args.dim, -1.0, 1.0);
    let h = sequential_scan(&seq);
    let analytic = scan_backward(&seq, &h, &grad_h)?;
    let fd = fd_scan_gradients(&seq, &grad_h, args.eps)?;
    let scan_err = max_rel_err(&analytic.grad_a, &fd.grad_a)
        .max(max_rel_err(&analytic.grad_x, &fd.grad_x))
        .max(max_rel_err(std::slice::from_ref(&analytic.grad_h0), std::slice::from_ref(&fd.grad_h0)));

    let k = 4;
    let kernel = ConvKernel::new(rows(&mut rng, k, args.dim, -1.0, 1.0))?;
    let u = rows(&mut rng, args.frames, args.dim, -1.0, 1.0);
    let pad = rows(&mut rng, k - 1, args.dim, -1.0, 1.0);
    let grad_y = rows(&mut rng, args.frames, args.dim, -1.0, 1.0);
    let analytic_conv = causal_conv_backward(&kernel, &u, Some(&pad), &grad_y)?;
    let fd_conv = fd_conv_gradients(&kernel, &u, &pad, &grad_y, args.eps)?;
    let conv_err = max_rel_err(&analytic_conv.grad_w, &fd_conv.grad_w)
        .max(max_rel_err(&analytic_conv.grad_u, &fd_conv.grad_u))
        .max(max_rel_err(&analytic_conv.grad_pad, &fd_conv.grad_pad));

    let mut pass = scan_err <= GRAD_TOLERANCE && conv_err <= GRAD_TOLERANCE;
    let distributed = match args.workers {
        None => serde_json::Value::Null,
        Some(n) => {
            let run = distributed_scan_backward(&seq, &h, &grad_h, &Topology::new(n)?)?;
            let err = max_rel_err(&run.grads.grad_a, &fd.grad_a)
                .max(max_rel_err(&run.grads.grad_x, &fd.grad_x))
                .max(max_rel_err(std::slice::from_ref(&run.grads.grad_h0), std::slice::from_ref(&fd.grad_h0)));
            pass &= err <= GRAD_TOLERANCE;
            json!({ "workers": n, "max_rel_err": err, "comm": run.comm })
        }
    };
    print_json(&json!({
        "frames": args.frames,
        "dim": args.dim,
        "eps": args.eps,
        "tolerance": GRAD_TOLERANCE,
        "scan": { "max_rel_err": scan_err },
        "conv": { "kernel": k, "max_rel_err": conv_err },
        "distributed": distributed,
        "pass": pass,
    }))?;
    Ok(if pass { Status::Ok } else { Status::CheckFailed })
}
