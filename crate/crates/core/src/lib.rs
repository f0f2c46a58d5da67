//! Sequence-parallel associative scans for linear recurrent layers, plus a
//! long-sequence point-tracking toolkit built around them.
//!
//! The crate is split into:
//!
//! * [`scan`]: the elementwise linear recurrence `h_t = a_t * h_{t-1} + x_t`,
//!   its associative combine, sequential and tree-parallel scans, adjoints,
//!   and depthwise causal convolution.
//! * [`dist`]: simulated multi-worker sequence parallelism (three-phase
//!   distributed scan, halo exchange, communication accounting).
//! * [`metrics`]: TAP-style evaluation (AJ, delta-avg, OA, survival, MTE),
//!   re-detection AJ, and the occlusion-weighted position loss.
//! * [`augment`]: sinusoidal roll with wrap margin and aspect-ratio crops.
//! * [`scenegen`]: a kinematic synthetic long-track generator.
//! * [`diagnostics`]: recurrent-state norm trajectories and decay histograms.

pub mod augment;
pub mod diagnostics;
pub mod dist;
mod error;
pub mod metrics;
pub mod numeric;
pub mod scan;
pub mod scenegen;
pub mod tracks;

pub use error::{Error, Result};
pub use numeric::Real;
pub use scan::{HiddenState, ScanElement, ScanGradients, ScanSequence};
pub use tracks::{Query, Track, TrackSet, VideoDims};
