//! Input builders shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tapscan::ScanSequence;

pub fn rows(rng: &mut impl Rng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(lo..hi)).collect()).collect()
}

/// Decays in `(0, 1)`, inputs and initial state in `(-1, 1)`.
pub fn random_sequence(seed: u64, frames: usize, dim: usize) -> ScanSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rows(&mut rng, frames, dim, 0.0, 1.0);
    let x = rows(&mut rng, frames, dim, -1.0, 1.0);
    let h0 = rows(&mut rng, 1, dim, -1.0, 1.0).remove(0);
    ScanSequence::from_rows(a, x, h0).expect("valid random sequence")
}
