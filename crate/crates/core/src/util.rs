//! Small shared helpers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a (seed, stream) pair. Distinct streams keep
/// same-seed consumers decorrelated.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
