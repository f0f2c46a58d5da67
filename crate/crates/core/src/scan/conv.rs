use crate::error::{shape_err, Error, Result};
use crate::numeric::Real;

/// Depthwise causal kernel: `weights[k][d]` multiplies `u_{t-k}[d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvKernel<F = f64> {
    weights: Vec<Vec<F>>,
}

impl<F: Real> ConvKernel<F> {
    pub fn new(weights: Vec<Vec<F>>) -> Result<Self> {
        let Some(first) = weights.first() else {
            return Err(Error::InvalidArgument("kernel length must be >= 1".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("kernel width must be >= 1".into()));
        }
        if weights.iter().any(|w| w.len() != dim) {
            return shape_err("kernel taps must share one width");
        }
        if weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("kernel weights must be finite".into()));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[Vec<F>] {
        &self.weights
    }

    /// Window length `K`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.weights[0].len()
    }

    /// Number of past steps each output needs: `K - 1`.
    pub fn history(&self) -> usize {
        self.len() - 1
    }
}

/// Gradients of a scalar loss through [`causal_conv_forward`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConvGradients<F = f64> {
    pub grad_w: Vec<Vec<F>>,
    pub grad_u: Vec<Vec<F>>,
    pub grad_pad: Vec<Vec<F>>,
}

/// `y_t = sum_k w_k * u_{t-k}`, reading `left_pad` (oldest row first, `K-1`
/// rows) for negative time indices. A missing pad means zeros.
pub fn causal_conv_forward<F: Real>(kernel: &ConvKernel<F>, u: &[Vec<F>], left_pad: Option<&[Vec<F>]>) -> Result<Vec<Vec<F>>> {
    let pad = resolve_pad(kernel, u, left_pad)?;
    let hist = kernel.history();
    let d = kernel.dim();
    let at = |s: isize| -> &[F] {
        if s >= 0 {
            &u[s as usize]
        } else {
            &pad[(hist as isize + s) as usize]
        }
    };
    Ok((0..u.len())
        .map(|t| {
            let mut y = vec![F::zero(); d];
            for (k, w) in kernel.weights().iter().enumerate() {
                let src = at(t as isize - k as isize);
                for ((y, &w), &v) in y.iter_mut().zip(w).zip(src) {
                    *y = *y + w * v;
                }
            }
            y
        })
        .collect())
}

/// Exact adjoint of [`causal_conv_forward`].
pub fn causal_conv_backward<F: Real>(
    kernel: &ConvKernel<F>,
    u: &[Vec<F>],
    left_pad: Option<&[Vec<F>]>,
    grad_y: &[Vec<F>],
) -> Result<ConvGradients<F>> {
    let pad = resolve_pad(kernel, u, left_pad)?;
    if grad_y.len() != u.len() || grad_y.iter().any(|g| g.len() != kernel.dim()) {
        return shape_err("upstream gradient must match the output shape");
    }
    let (k_len, hist, d, n) = (kernel.len(), kernel.history(), kernel.dim(), u.len());
    let mut grad_w = vec![vec![F::zero(); d]; k_len];
    let mut grad_u = vec![vec![F::zero(); d]; n];
    let mut grad_pad = vec![vec![F::zero(); d]; hist];

    for (t, gy) in grad_y.iter().enumerate() {
        for (k, w) in kernel.weights().iter().enumerate() {
            let s = t as isize - k as isize;
            let (src, dst) = if s >= 0 {
                (&u[s as usize], &mut grad_u[s as usize])
            } else {
                let p = (hist as isize + s) as usize;
                (&pad[p], &mut grad_pad[p])
            };
            for i in 0..d {
                grad_w[k][i] = grad_w[k][i] + gy[i] * src[i];
                dst[i] = dst[i] + w[i] * gy[i];
            }
        }
    }
    Ok(ConvGradients { grad_w, grad_u, grad_pad })
}

fn resolve_pad<F: Real>(kernel: &ConvKernel<F>, u: &[Vec<F>], left_pad: Option<&[Vec<F>]>) -> Result<Vec<Vec<F>>> {
    let (hist, d) = (kernel.history(), kernel.dim());
    if u.iter().any(|row| row.len() != d) {
        return shape_err(format!("input rows must have width {d}"));
    }
    match left_pad {
        None => Ok(vec![vec![F::zero(); d]; hist]),
        Some(p) if p.len() == hist && p.iter().all(|r| r.len() == d) => Ok(p.to_vec()),
        Some(p) => shape_err(format!("left pad must be {hist} x {d}, got {} rows", p.len())),
    }
}
