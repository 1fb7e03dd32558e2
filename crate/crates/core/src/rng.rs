//! Seedable, splittable random streams.
//!
//! A stream is a ChaCha20 generator keyed by `seed` with its 64-bit stream
//! counter set to `stream_index`, so distinct indices under one seed give
//! non-overlapping keystreams.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Serializable identity of an [`RngStream`] (its state at construction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamInfo {
    pub seed: u64,
    pub stream_index: u64,
}

impl std::fmt::Display for StreamInfo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.seed, self.stream_index)
    }
}

#[derive(Clone, Debug)]
pub struct RngStream {
    info: StreamInfo,
    rng: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self {
            info: StreamInfo { seed, stream_index },
            rng,
        }
    }

    pub fn info(&self) -> StreamInfo {
        self.info
    }

    pub fn seed(&self) -> u64 {
        self.info.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.info.stream_index
    }

    /// A fresh stream under the same seed whose index is a hash of this
    /// stream's index and `k`. Does not advance `self`.
    pub fn substream(&self, k: u64) -> Self {
        let idx = splitmix64(self.info.stream_index ^ splitmix64(k.wrapping_add(0x5bd1_e995)));
        Self::new(self.info.seed, idx)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
