//! Deterministic counter-based generator for randomized suites.
//!
//! SplitMix64 over a 64-bit counter: the same seed yields the same stream on
//! every platform, which keeps property runs and their JSON reports
//! reproducible byte for byte.

use crate::rat::{rat, Rat};

#[derive(Clone, Debug)]
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    /// Derives an independent stream, used to decorrelate per-case draws.
    pub fn fork(&mut self, tag: u64) -> DetRng {
        DetRng::new(self.next_u64() ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        // Desk-scale ranges; modulo bias is irrelevant at these sizes.
        self.next_u64() % n
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// Rational with numerator in `[lo, hi]` over a denominator from `dens`.
    pub fn rat_in(&mut self, lo: i64, hi: i64, dens: &[i64]) -> Rat {
        debug_assert!(lo <= hi && !dens.is_empty());
        let den = dens[self.below(dens.len() as u64) as usize];
        let span = (hi - lo) as u64 + 1;
        let num = lo + self.below(span) as i64;
        rat(num, den)
    }
}
