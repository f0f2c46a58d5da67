use rayon::prelude::*;

use super::element::{HiddenState, ScanElement, ScanSequence};
use crate::numeric::Real;

// Below this many scalar entries per tree level the sweeps stay on one thread.
const PAR_THRESHOLD: usize = 1 << 14;

/// Left-to-right evaluation of `h_t = a_t * h_{t-1} + x_t`.
///
/// This is the reference every other scan in the crate is checked against.
pub fn sequential_scan<F: Real>(seq: &ScanSequence<F>) -> Vec<HiddenState<F>> {
    let mut h = seq.h0().0.clone();
    seq.elements()
        .iter()
        .map(|e| {
            for ((h, &a), &x) in h.iter_mut().zip(e.a()).zip(e.x()) {
                *h = a * *h + x;
            }
            HiddenState(h.clone())
        })
        .collect()
}

/// Work-efficient (up-sweep / down-sweep) scan over the step composition.
///
/// The tree shape depends only on `T`, so floating-point association order,
/// and therefore the result, is identical from run to run regardless of how
/// many threads execute the sweeps.
pub fn parallel_scan<F: Real>(seq: &ScanSequence<F>) -> Vec<HiddenState<F>> {
    let prefixes = inclusive_prefixes(seq.elements());
    let h0 = seq.h0();
    prefixes.into_iter().map(|p| HiddenState(p.apply(h0))).collect()
}

/// Inclusive prefix compositions `e_t . ... . e_1` for every `t`.
pub(crate) fn inclusive_prefixes<F: Real>(elements: &[ScanElement<F>]) -> Vec<ScanElement<F>> {
    let n = elements.len();
    if n == 0 {
        return Vec::new();
    }
    let dim = elements[0].dim();
    let size = n.next_power_of_two();
    let mut tree: Vec<ScanElement<F>> = elements.to_vec();
    tree.resize(size, ScanElement::identity_unchecked(dim));
    let parallel = size * dim >= PAR_THRESHOLD;

    // Up-sweep: the last slot of every 2s-block accumulates the block total.
    let mut stride = 1;
    while stride < size {
        let block = 2 * stride;
        let up = |chunk: &mut [ScanElement<F>]| {
            let (left, right) = chunk.split_at_mut(stride);
            right[stride - 1].absorb_earlier(&left[stride - 1]);
        };
        if parallel {
            tree.par_chunks_mut(block).for_each(up);
        } else {
            tree.chunks_mut(block).for_each(up);
        }
        stride = block;
    }

    // Down-sweep: turn block totals into exclusive prefixes.
    tree[size - 1] = ScanElement::identity_unchecked(dim);
    let mut stride = size / 2;
    while stride >= 1 {
        let block = 2 * stride;
        let down = |chunk: &mut [ScanElement<F>]| {
            let (left, right) = chunk.split_at_mut(stride);
            let parent = right[stride - 1].clone();
            let left_total = std::mem::replace(&mut left[stride - 1], parent);
            // prefix(right) = left_total . prefix(parent)
            let mut right_prefix = left_total;
            right_prefix.absorb_earlier(&right[stride - 1]);
            right[stride - 1] = right_prefix;
        };
        if parallel {
            tree.par_chunks_mut(block).for_each(down);
        } else {
            tree.chunks_mut(block).for_each(down);
        }
        stride /= 2;
    }

    tree.truncate(n);
    let finish = |(excl, e): (ScanElement<F>, &ScanElement<F>)| {
        let mut incl = e.clone();
        incl.absorb_earlier(&excl);
        incl
    };
    if parallel {
        tree.into_par_iter().zip(elements.par_iter()).map(finish).collect()
    } else {
        tree.into_iter().zip(elements).map(finish).collect()
    }
}
