//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` and placed on stream number `replicate`
//! via `set_stream`. Uniform doubles take the top 53 bits of `next_u64` and
//! scale by `2^-53`, so draws are identical on every platform.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::measures::{JointMeasure, Priors};

#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, replicate: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replicate);
        Self { rng }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// A strictly positive joint measure on `z_count` cells with total mass one.
    ///
    /// Cell weights are drawn from `[0.05, 1)` before normalization, so every
    /// likelihood ratio lies in `(0.05, 20)`.
    pub fn joint_measure(&mut self, z_count: usize) -> JointMeasure {
        let raw: Vec<f64> = (0..2 * z_count).map(|_| self.uniform_in(0.05, 1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mu: Vec<f64> = raw[..z_count].iter().map(|w| w / total).collect();
        let pi: Vec<f64> = raw[z_count..].iter().map(|w| w / total).collect();
        let p: f64 = mu.iter().sum();
        let priors = Priors::from_p(p).expect("p in (0, 1) by construction");
        JointMeasure::with_priors_unchecked(mu, pi, priors)
    }
}
