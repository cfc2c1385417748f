//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 (`rand_chacha`), seeded
//! with the user seed and positioned on a stream id that combines a purpose
//! tag with an item index. Distinct purposes therefore never share a stream,
//! and item `k` of a batch is reproducible on its own, whatever order the
//! batch runs in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tag occupying the top byte of the 64-bit stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Stream {
    HaarState = 1,
    GueObservable = 2,
    FuzzA = 3,
    FuzzB = 4,
    FuzzState = 5,
    Extremize = 6,
    Uncorrelated = 7,
    Test = 255,
}

const INDEX_BITS: u32 = 56;

pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << INDEX_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << INDEX_BITS) | (index & ((1 << INDEX_BITS) - 1)));
    rng
}
