//! Seeded substream derivation. Every random decision point gets its own
//! stream keyed by (seed, purpose, iteration, unit), so parallel evaluation
//! scheduling cannot change results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) mod purpose {
    pub const INITIALISER: u64 = 1;
    pub const WOLF: u64 = 2;
    pub const BASELINE: u64 = 3;
    pub const GENERATOR: u64 = 4;
}

pub(crate) fn substream(seed: u64, purpose: u64, iteration: usize, unit: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(
        (purpose << 56) | ((iteration as u64 & 0xffff_ffff) << 24) | (unit as u64 & 0xff_ffff),
    );
    rng
}
