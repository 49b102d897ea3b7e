use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Concrete generator used throughout.
pub type SourceRng = ChaCha8Rng;

/// Deterministic generator for `(seed, stream_id)`. ChaCha streams sharing a
/// key but differing in stream number produce non-overlapping keystreams.
pub fn rng_stream(seed: u64, stream_id: u64) -> SourceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

#[inline]
pub fn standard_normal(rng: &mut SourceRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Three independent streams per block of paths: one for the length, one for
/// the pin and one for the driving noise.
#[derive(Debug, Clone)]
pub struct PathRng {
    pub length: SourceRng,
    pub pin: SourceRng,
    pub noise: SourceRng,
}

impl PathRng {
    pub fn new(seed: u64, block: u64) -> Self {
        Self {
            length: rng_stream(seed, 3 * block),
            pin: rng_stream(seed, 3 * block + 1),
            noise: rng_stream(seed, 3 * block + 2),
        }
    }
}
