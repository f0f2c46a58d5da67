//! Elementwise linear recurrences and depthwise causal convolutions.
//!
//! A recurrence step `h_t = a_t * h_{t-1} + x_t` is a [`ScanElement`]
//! `(a_t, x_t)`. Steps compose associatively, `(a2, x2) . (a1, x1) =
//! (a2 * a1, a2 * x1 + x2)`, which is what lets the whole state sequence be
//! computed by a tree-shaped prefix scan.

mod backward;
mod conv;
mod element;
mod gradcheck;
mod kernels;

pub use backward::{scan_backward, ScanGradients};
pub use conv::{causal_conv_backward, causal_conv_forward, ConvGradients, ConvKernel};
pub use element::{compose_elements, identity_element, HiddenState, ScanElement, ScanSequence};
pub use gradcheck::{fd_conv_gradients, fd_scan_gradients};
pub use kernels::{parallel_scan, sequential_scan};

pub(crate) use backward::{assemble as assemble_gradients, check_shapes as backward_shapes};
