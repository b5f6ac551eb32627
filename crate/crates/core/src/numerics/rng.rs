//! Counter-based splittable RNG streams.
//!
//! Every sampler in the crate takes an [`RngStream`] rather than a live
//! generator, so a replicate's randomness is a pure function of
//! `(master_seed, stream_index)` and independent of thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A named position in a family of independent random streams.
///
/// Distinct stream indices give statistically independent sequences;
/// the same `(seed, stream)` pair always reproduces the identical
/// sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    /// Derived stream `k` slots after this one; used to hand each
    /// replicate its own stream.
    pub fn offset(&self, k: u64) -> Self {
        RngStream {
            master_seed: self.master_seed,
            stream_index: self.stream_index.wrapping_add(k),
        }
    }

    /// Instantiate the generator at position zero of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.master_seed);
        r.set_stream(self.stream_index);
        r
    }
}
