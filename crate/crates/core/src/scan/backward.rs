use super::element::{HiddenState, ScanElement, ScanSequence};
use super::kernels::parallel_scan;
use crate::error::{shape_err, Result};
use crate::numeric::Real;

/// Adjoints of a scalar loss with respect to every recurrence input.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanGradients<F = f64> {
    pub grad_a: Vec<Vec<F>>,
    pub grad_x: Vec<Vec<F>>,
    pub grad_h0: Vec<F>,
}

/// Reverse-mode pass through `h_t = a_t * h_{t-1} + x_t`.
///
/// With `g_t = dL/dh_t` (total) the adjoint recurrence is
/// `g_t = grad_h_t + a_{t+1} * g_{t+1}`. It is evaluated as the reversed
/// linear recurrence `q_t = a_t * q_{t+1} + a_t * grad_h_t` (with
/// `q_t = a_t * g_t`), whose steps only touch index `t`, and runs through
/// [`parallel_scan`]. Then `grad_x_t = g_t = grad_h_t + q_{t+1}`,
/// `grad_a_t = g_t * h_{t-1}` and `grad_h0 = q_1`.
pub fn scan_backward<F: Real>(seq: &ScanSequence<F>, h: &[HiddenState<F>], grad_h: &[Vec<F>]) -> Result<ScanGradients<F>> {
    check_shapes(seq, h, grad_h)?;
    let reversed: Vec<ScanElement<F>> = seq
        .elements()
        .iter()
        .zip(grad_h)
        .rev()
        .map(|(e, gh)| ScanElement::from_parts(e.a().to_vec(), mul(e.a(), gh)))
        .collect();
    let rev_seq = ScanSequence::new(reversed, HiddenState::zeros(seq.dim()))?;
    let mut q = parallel_scan(&rev_seq);
    q.reverse();
    Ok(assemble(seq, h, grad_h, &q, &vec![F::zero(); seq.dim()]))
}

/// Builds the gradient triple from reversed-scan states `q` (one per step)
/// and the state just past the end, `q_end` (zero for a whole sequence).
pub(crate) fn assemble<F: Real>(
    seq: &ScanSequence<F>,
    h: &[HiddenState<F>],
    grad_h: &[Vec<F>],
    q: &[HiddenState<F>],
    q_end: &[F],
) -> ScanGradients<F> {
    let n = seq.len();
    let grad_x: Vec<Vec<F>> = (0..n)
        .map(|t| {
            let next = if t + 1 < n { &q[t + 1].0[..] } else { q_end };
            grad_h[t].iter().zip(next).map(|(&g, &q)| g + q).collect()
        })
        .collect();
    let grad_a = (0..n)
        .map(|t| {
            let prev = if t == 0 { &seq.h0().0[..] } else { &h[t - 1].0[..] };
            mul(&grad_x[t], prev)
        })
        .collect();
    ScanGradients { grad_a, grad_x, grad_h0: q[0].0.clone() }
}

pub(crate) fn check_shapes<F: Real>(seq: &ScanSequence<F>, h: &[HiddenState<F>], grad_h: &[Vec<F>]) -> Result<()> {
    let (n, d) = (seq.len(), seq.dim());
    if h.len() != n || grad_h.len() != n {
        return shape_err(format!("expected {n} states and upstream gradients, got {} and {}", h.len(), grad_h.len()));
    }
    if h.iter().any(|s| s.len() != d) || grad_h.iter().any(|g| g.len() != d) {
        return shape_err(format!("state and gradient rows must have width {d}"));
    }
    Ok(())
}

pub(crate) fn mul<F: Real>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(&a, &b)| a * b).collect()
}
