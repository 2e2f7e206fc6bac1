//! Seeded randomness shared by the stochastic engine and the dataset sampler.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`, which
//! produces the same stream on every platform. Index draws use rejection
//! sampling over the full `u64` range, so they carry no modulo bias.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `0..n`. Panics if `n == 0`.
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0, "uniform_index over an empty range");
    let n = n as u64;
    // largest multiple of n representable; values at or above it are rejected
    let zone = u64::MAX - (u64::MAX % n + 1) % n;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return (v % n) as usize;
        }
    }
}
