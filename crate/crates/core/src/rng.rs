//! Reproducible per-trial random streams.
//!
//! A stream is a ChaCha8 generator keyed by a 64-bit seed and positioned on one
//! of its 2^64 independent streams, so `(seed, stream)` fully determines the
//! draw sequence regardless of which thread consumes it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// Stream for trial `trial` of an experiment point identified by `domain`.
    ///
    /// The domain is mixed into the key so different experiment points drawn
    /// from one master seed never share streams.
    pub fn for_trial(master_seed: u64, domain: u64, trial: u64) -> Self {
        Self::new(splitmix64(master_seed ^ splitmix64(domain)), trial)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
