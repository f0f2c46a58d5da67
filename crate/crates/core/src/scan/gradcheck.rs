//! Central finite-difference gradients of `L = sum_t <g_t, y_t>` for
//! checking the analytic adjoints.

use super::conv::{causal_conv_forward, ConvGradients, ConvKernel};
use super::element::{ScanElement, ScanSequence};
use super::kernels::sequential_scan;
use super::ScanGradients;
use crate::error::{Error, Result};

fn dot(g: &[Vec<f64>], y: impl IntoIterator<Item = Vec<f64>>) -> f64 {
    g.iter().zip(y).flat_map(|(g, y)| g.iter().zip(y).map(|(a, b)| a * b).collect::<Vec<_>>()).sum()
}

fn perturb(rows: &mut [Vec<f64>], eps: f64, mut loss: impl FnMut(&[Vec<f64>]) -> Result<f64>) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in 0..rows.len() {
        let mut row = Vec::with_capacity(rows[r].len());
        for c in 0..rows[r].len() {
            let orig = rows[r][c];
            rows[r][c] = orig + eps;
            let up = loss(rows)?;
            rows[r][c] = orig - eps;
            let down = loss(rows)?;
            rows[r][c] = orig;
            row.push((up - down) / (2.0 * eps));
        }
        out.push(row);
    }
    Ok(out)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {eps}")))
    }
}

pub fn fd_scan_gradients(seq: &ScanSequence, grad_h: &[Vec<f64>], eps: f64) -> Result<ScanGradients> {
    check_eps(eps)?;
    let mut a: Vec<Vec<f64>> = seq.elements().iter().map(|e| e.a().to_vec()).collect();
    let mut x: Vec<Vec<f64>> = seq.elements().iter().map(|e| e.x().to_vec()).collect();
    let mut h0 = vec![seq.h0().0.clone()];
    let loss = |a: &[Vec<f64>], x: &[Vec<f64>], h0: &[f64]| -> Result<f64> {
        let elements = a.iter().zip(x).map(|(a, x)| ScanElement::from_parts(a.clone(), x.clone())).collect();
        let s = ScanSequence::new(elements, crate::HiddenState(h0.to_vec()))?;
        Ok(dot(grad_h, sequential_scan(&s).into_iter().map(|h| h.0)))
    };
    let grad_a = perturb(&mut a, eps, |a| loss(a, &x, &h0[0]))?;
    let grad_x = perturb(&mut x, eps, |x| loss(&a, x, &h0[0]))?;
    let grad_h0 = perturb(&mut h0, eps, |h| loss(&a, &x, &h[0]))?.remove(0);
    Ok(ScanGradients { grad_a, grad_x, grad_h0 })
}

pub fn fd_conv_gradients(kernel: &ConvKernel, u: &[Vec<f64>], left_pad: &[Vec<f64>], grad_y: &[Vec<f64>], eps: f64) -> Result<ConvGradients> {
    check_eps(eps)?;
    let loss = |w: &[Vec<f64>], u: &[Vec<f64>], p: &[Vec<f64>]| -> Result<f64> {
        Ok(dot(grad_y, causal_conv_forward(&ConvKernel::new(w.to_vec())?, u, Some(p))?))
    };
    let w = kernel.weights().to_vec();
    let grad_w = perturb(&mut w.clone(), eps, |w| loss(w, u, left_pad))?;
    let grad_u = perturb(&mut u.to_vec(), eps, |u| loss(&w, u, left_pad))?;
    let grad_pad = perturb(&mut left_pad.to_vec(), eps, |p| loss(&w, u, p))?;
    Ok(ConvGradients { grad_w, grad_u, grad_pad })
}
