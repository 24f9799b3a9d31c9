//! The seeded generator used for every random choice in the crate.
//!
//! SplitMix64 is fully specified by its update formula, so ports in other
//! languages can reproduce keys and ciphertexts byte for byte:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15          (mod 2^64)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9     (mod 2^64)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB     (mod 2^64)
//! output z ^ (z >> 31)
//! ```
//!
//! Bounded draws use rejection sampling: for a bound `b`, outputs below
//! `(2^64 - b) mod b` are discarded and the first accepted output is reduced
//! mod `b`. Big-integer bounds draw `ceil(bits / 64)` words, little-endian,
//! mask the top word to the bit length of the bound and reject values `>= b`.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, bound)`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform draw from `[lo, hi]` inclusive.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty range");
        if lo == 0 && hi == u64::MAX {
            return self.next_u64();
        }
        lo + self.below(hi - lo + 1)
    }

    pub fn bit(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Uniform draw from `[0, bound)` for an arbitrary-precision bound.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(bound.bits() > 0, "empty range");
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        let mask = if top_bits == 64 {
            u64::MAX
        } else {
            (1u64 << top_bits) - 1
        };
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            digits[words - 1] &= mask;
            let x = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect::<Vec<u32>>(),
            );
            if &x < bound {
                return x;
            }
        }
    }

    /// Derives an independent child generator, leaving `self` advanced by one step.
    pub fn fork(&mut self) -> Self {
        Self::new(self.next_u64())
    }
}
