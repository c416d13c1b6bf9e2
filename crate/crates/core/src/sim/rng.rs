use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Arrival generator: xoshiro256++ whose 256-bit state is filled from the
/// 64-bit seed by SplitMix64.
///
/// A Bernoulli(p) draw takes the top 53 bits of one output as a uniform
/// `u` in `[0, 1)` and succeeds when `u < p`, so `p = 0` never fires and
/// `p = 1` always does.
#[derive(Debug, Clone)]
pub struct ArrivalRng {
    inner: Xoshiro256PlusPlus,
}

impl ArrivalRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_unit() < p
    }
}
