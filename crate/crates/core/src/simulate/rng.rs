//! Deterministic, splittable random streams.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// A named position in the key/stream space of a counter-based generator.
///
/// Identical `(seed, stream_id)` pairs reproduce identical draws, and
/// distinct stream ids select statistically independent keystreams, so
/// ensembles can fan out across workers without sharing mutable state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Offset substream: `stream_id + delta`. Used for per-path streams.
    pub fn substream(&self, delta: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(delta),
        }
    }

    /// One of four interior lanes `4*stream_id + lane`, reserved for the
    /// independent noise sources inside a single path (subordinator, FBM).
    pub(crate) fn sublane(&self, lane: u64) -> Self {
        debug_assert!(lane < 4);
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_mul(4).wrapping_add(lane),
        }
    }

    /// Instantiates the generator at this position.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
