//! Seeded randomness: xoshiro256** seeded through SplitMix64.
//!
//! Trial `t` of a run with seed `s` uses the stream seeded with
//! `s + t * 0x9E3779B97F4A7C15` (wrapping), so any single trial can be
//! replayed without running the ones before it.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::exactla::{FieldSpec, Scalar};

const TRIAL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct Rng(Xoshiro256StarStar);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(seed.wrapping_add(trial.wrapping_mul(TRIAL_STRIDE)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..m` by rejection; `m` must be positive.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0);
        let zone = u64::MAX - u64::MAX % m;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % m;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// Uniform over GF(p); over the rationals, a uniform integer in `-3..=3`.
    pub fn scalar(&mut self, field: FieldSpec) -> Scalar {
        match field.characteristic() {
            Some(p) => field.from_i64(self.below(p) as i64),
            None => field.from_i64(self.below(7) as i64 - 3),
        }
    }

    /// Like [`Rng::scalar`] but never zero.
    pub fn nonzero_scalar(&mut self, field: FieldSpec) -> Scalar {
        loop {
            let s = self.scalar(field);
            if !field.is_zero(&s) {
                return s;
            }
        }
    }

    /// A small entry for basis changes: uniform over GF(p), `-1..=1` over Q.
    pub fn small_scalar(&mut self, field: FieldSpec) -> Scalar {
        match field.characteristic() {
            Some(_) => self.scalar(field),
            None => field.from_i64(self.below(3) as i64 - 1),
        }
    }
}
