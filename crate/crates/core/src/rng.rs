//! Seeded random streams.
//!
//! Every experiment uses ChaCha8 seeded from a `u64`. Replicate `i` of an
//! experiment with seed `s` draws from stream `i` of the generator seeded
//! with `s`, so the random input of a replicate does not depend on how the
//! replicates are scheduled across threads.
//!
//! Uniform integer draws go through `Rng::random_range`, which rejects
//! out-of-range samples and is free of modulo bias.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ExperimentRng = ChaCha8Rng;

/// Generator for a single run with the given seed.
pub fn seeded(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for replicate `index` of the experiment seeded with `seed`.
pub fn replicate_stream(seed: u64, index: u64) -> ExperimentRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
