//! Keyed, platform-independent random streams.
//!
//! A stream is a ChaCha8 keystream whose 256-bit key is
//! `SHA-256("bodymap-synth/stream/v1" || master_seed.to_le_bytes() || label)`.
//! ChaCha is counter-mode, so the output sequence depends only on the key and
//! is identical on every platform. All derived quantities (floats, integer
//! ranges, coin flips) are computed here from raw `u64` words, never through a
//! general-purpose distribution library, so the sequence of geometry values is
//! frozen together with this file.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

const DOMAIN_TAG: &[u8] = b"bodymap-synth/stream/v1";

/// A deterministic pseudo-random stream derived from `(master_seed, label)`.
///
/// Not meant to be shared between threads mid-sequence; derive one stream per
/// work item instead.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    seed: u64,
    label: String,
}

/// Derive the stream for `label` under `master_seed`.
pub fn derive_stream(master_seed: u64, label: &str) -> RandomStream {
    RandomStream::new(master_seed, label)
}

impl RandomStream {
    pub fn new(master_seed: u64, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(DOMAIN_TAG);
        hasher.update(master_seed.to_le_bytes());
        hasher.update(label.as_bytes());
        let mut key = [0u8; 32];
        key.copy_from_slice(&hasher.finalize());
        RandomStream {
            rng: ChaCha8Rng::from_seed(key),
            seed: master_seed,
            label: label.to_owned(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[lo, hi]` (inclusive), unbiased by rejection.
    pub fn range_inclusive(&mut self, lo: u32, hi: u32) -> u32 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let span = u64::from(hi - lo) + 1;
        // Largest multiple of `span` that fits; draws at or above it are rejected.
        let zone = u64::MAX - (u64::MAX % span + 1) % span;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return lo + (x % span) as u32;
            }
        }
    }

    /// A fair coin.
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}
