//! Seeded random streams.
//!
//! Every shot or trial owns an independent ChaCha stream addressed by
//! `(seed, index, purpose)`, so results never depend on scheduling or on the
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Measure = 0,
    Noise = 1,
    Trial = 2,
}

pub fn stream(seed: u64, index: u64, purpose: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(purpose as u64));
    rng
}
