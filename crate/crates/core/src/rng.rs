//! Counter-based splittable random streams.
//!
//! Every stream is a pure function of `(master_seed, stream_id, counter)`:
//! the `i`th output is the SplitMix64 finalizer applied to
//! `key + i * GAMMA`, with the key derived by mixing the master seed and
//! stream id. Streams derived from distinct ids are statistically
//! independent for practical purposes, and any draw can be reproduced
//! without replaying the ones before it. This is what lets experiment
//! trials run on a thread pool while staying bit-reproducible: trial `t`
//! always uses stream `(master_seed, t)` no matter which worker picks it up.

use num_traits::Float;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a bijective mixer on `u64`.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A keyed counter stream of pseudo-random numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
    /// Second Box-Muller output, held for the next `gaussian` call.
    cached_gaussian: Option<u64>,
}

impl CounterRng {
    /// Stream `stream_id` of the family keyed by `master_seed`.
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let key = mix64(master_seed.wrapping_add(GAMMA)) ^ mix64(stream_id.wrapping_mul(GAMMA) ^ 0x6a09_e667_f3bc_c909);
        CounterRng { key, counter: 0, cached_gaussian: None }
    }

    /// Derive a child stream; `(rng, id)` pairs never collide with the
    /// parent's own outputs.
    pub fn substream(&self, stream_id: u64) -> Self {
        CounterRng::new(self.key ^ 0x1f83_d9ab_fb41_bd6b, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)));
        self.counter = self.counter.wrapping_add(1);
        out
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller on the counter stream.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(bits) = self.cached_gaussian.take() {
            return f64::from_bits(bits);
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * Float::ln(u1)).sqrt();
        let angle = 2.0 * core::f64::consts::PI * u2;
        let (sin, cos) = Float::sin_cos(angle);
        self.cached_gaussian = Some((radius * sin).to_bits());
        radius * cos
    }

    /// ±1 with equal probability (sign bit of the next word).
    pub fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
