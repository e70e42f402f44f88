//! Counter-keyed randomness.
//!
//! Each draw is addressed by `(seed, stream)`: ChaCha8 keyed by the seed with
//! the stream selector set to the bidder or sample index. Draws therefore do
//! not depend on evaluation order or worker count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generator positioned at the start of `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The first 64-bit word of `stream` under `seed`.
pub fn word(seed: u64, stream: u64) -> u64 {
    stream_rng(seed, stream).next_u64()
}

/// Child seed for sub-experiment `index`, taken from a reserved key space.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    word(seed ^ 0x9e37_79b9_7f4a_7c15, index)
}
