//! Seeded uniform stream.
//!
//! The generator is SplitMix64, written out in full so that any port can
//! reproduce samples bit for bit:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15            (wrapping)
//! z      <- state
//! z      <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//! z      <- (z xor (z >> 27)) * 0x94D049BB133111EB (wrapping)
//! output <- z xor (z >> 31)
//! ```
//!
//! Doubles in `[0, 1)` take the top 53 bits: `(output >> 11) * 2^-53`.
//! `split` seeds a child stream with the parent's next output.

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)` with 53 random mantissa bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    pub fn split(&mut self) -> Self {
        Self::new(self.next_u64())
    }
}

/// Iterator over the uniform doubles of a seeded stream.
#[derive(Debug, Clone)]
pub struct UniformStream(SplitMix64);

impl Iterator for UniformStream {
    type Item = f64;

    #[inline]
    fn next(&mut self) -> Option<f64> {
        Some(self.0.next_f64())
    }
}

pub fn rng_stream(seed: u64) -> UniformStream {
    UniformStream(SplitMix64::new(seed))
}
