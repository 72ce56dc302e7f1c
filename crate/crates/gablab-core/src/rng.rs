//! Deterministic pseudo-random number generation for reproducible experiments.
//!
//! The generator is xoshiro256**, seeded from a single `u64` through four
//! rounds of splitmix64, so the same seed yields the same window on every
//! platform and build. Constants:
//!
//! - splitmix64: increment `0x9E3779B97F4A7C15`, mixers `0xBF58476D1CE4E5B9`
//!   and `0x94D049BB133111EB`, shifts 30/27/31.
//! - xoshiro256**: scrambler `rotl(s1 * 5, 7) * 9`, linear engine shifts 17/45.
//! - Unit doubles take the top 53 bits: `(x >> 11) * 2^-53`.

use alloc::vec::Vec;
use num_complex::Complex64;

/// xoshiro256** with splitmix64 seeding.
#[derive(Clone, Debug)]
pub struct Rng {
    state: [u64; 4],
}

impl Rng {
    pub fn from_seed(seed: u64) -> Rng {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        Rng { state: [next(), next(), next(), next()] }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.state[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.state[1] << 17;
        self.state[2] ^= self.state[0];
        self.state[3] ^= self.state[1];
        self.state[1] ^= self.state[2];
        self.state[0] ^= self.state[3];
        self.state[2] ^= t;
        self.state[3] = self.state[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_unit() - 1.0
    }

    /// Complex with independent real/imaginary parts uniform in `[-1, 1)`.
    pub fn next_complex(&mut self) -> Complex64 {
        let re = self.next_symmetric();
        let im = self.next_symmetric();
        Complex64::new(re, im)
    }

    /// A length-`n` complex vector of `next_complex` draws.
    pub fn complex_vector(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.next_complex()).collect()
    }
}
