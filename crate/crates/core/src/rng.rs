//! Seeded random sources.
//!
//! One 64-bit seed determines an entire experiment. Trial `i` draws from its
//! own ChaCha stream `i`, so trials can run in any order or in parallel and
//! still produce identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of the experiment seeded by `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
