//! Floating-point plumbing shared by the kernels.

use std::fmt::Debug;

use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Scalar type the scan kernels run on (`f64` for all exactness checks,
/// `f32` supported with looser tolerances).
pub trait Real: Float + Debug + Default + Send + Sync + 'static {}

impl<T> Real for T where T: Float + Debug + Default + Send + Sync + 'static {}

/// Relative error with a unit floor: `|got - want| / max(|want|, 1)`.
///
/// Values of magnitude below one are compared absolutely so that entries
/// crossing zero do not blow the ratio up.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Maximum [`rel_err`] over two equally shaped row sets.
pub fn max_rel_err<R: AsRef<[f64]>>(got: &[R], want: &[R]) -> f64 {
    assert_eq!(got.len(), want.len(), "row count mismatch");
    got.iter()
        .zip(want)
        .flat_map(|(g, w)| {
            let (g, w) = (g.as_ref(), w.as_ref());
            assert_eq!(g.len(), w.len(), "row width mismatch");
            g.iter().zip(w).map(|(&g, &w)| rel_err(g, w))
        })
        .fold(0.0, f64::max)
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// `amplitude * sin(2π * frequency * t / frames + phase)`; frequency is in cycles per video.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Sinusoid {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A time-invariant offset.
    pub fn constant(value: f64) -> Self {
        Self { amplitude: value, frequency: 0.0, phase: std::f64::consts::FRAC_PI_2 }
    }

    pub fn at(&self, t: usize, frames: usize) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * (std::f64::consts::TAU * self.frequency * t as f64 / frames as f64 + self.phase).sin()
    }
}
