//! Seeded randomness with well-separated substreams.
//!
//! Each replication owns one [`RngStream`] keyed by `(seed, replication)`;
//! the ChaCha stream counter keeps substreams independent while the seed
//! stays shared, so replication-parallel runs cannot interleave draws.
//! Determinism is promised within one build of the artifact, not across
//! compiler or dependency upgrades.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

/// A deterministic Gaussian-capable stream for one replication.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    replication: u64,
    draws: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Stream for `replication` under the experiment-level `seed`.
    pub fn new(seed: u64, replication: u64) -> RngStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replication);
        RngStream {
            seed,
            replication,
            draws: 0,
            rng,
        }
    }

    /// One standard normal draw; advances the step counter.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.draws += 1;
        StandardNormal.sample(&mut self.rng)
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn replication(&self) -> u64 {
        self.replication
    }

    /// Number of draws taken so far.
    #[inline]
    pub fn draws(&self) -> u64 {
        self.draws
    }
}
