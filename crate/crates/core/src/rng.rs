//! Seeded random streams, one per operation index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream `op_index` of the run seed; distinct indices never share output.
pub fn stream(seed: u64, op_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(op_index);
    rng
}
