//! Seeded random number streams.
//!
//! All randomized stages (codebook sampling, k-means initialization) draw
//! from ChaCha8 streams derived from a single user-visible seed, so a run is
//! reproducible bit-for-bit on every platform and independent of thread
//! count. Distinct pipeline stages use distinct stream indices of the same
//! seed, which keeps per-class and per-label codebook learning independent of
//! each other.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Factory for deterministic RNG streams derived from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator for stream index `idx`. Same `(seed, idx)` always yields
    /// the same draw sequence.
    pub fn stream(&self, idx: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(idx);
        rng
    }
}

/// Stream index layout: feature class `k` owns indices `k * 1000 ..`.
pub fn class_stream_base(feature_class: u8) -> u64 {
    feature_class as u64 * 1000
}

/// Stream for the flat (unsupervised, non-SVQ) codebook of a feature class.
pub fn class_stream(feature_class: u8) -> u64 {
    class_stream_base(feature_class)
}

/// Stream for the per-label codebook `label_idx` of a supervised
/// super-codebook. Label 0 shares the flat stream, so a one-label supervised
/// codebook is identical to unsupervised generation.
pub fn supervised_stream(feature_class: u8, label_idx: usize) -> u64 {
    class_stream_base(feature_class) + label_idx as u64
}

/// Stream for SVQ block `block_idx` of a feature class.
pub fn svq_block_stream(feature_class: u8, block_idx: usize) -> u64 {
    class_stream_base(feature_class) + 100 + block_idx as u64
}

/// Stream for the SVQ top-stage codebook of a feature class.
pub fn svq_top_stream(feature_class: u8) -> u64 {
    class_stream_base(feature_class) + 999
}
