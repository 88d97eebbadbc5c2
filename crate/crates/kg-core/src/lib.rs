//! Knowledge-gradient best-arm identification for independent Gaussian arms,
//! together with the finite-time analytical machinery that constrains it:
//! two-sided envelopes on the pull ratios and sampling rates, upper and lower
//! bounds on the probability of error and simple regret, a cumulative-regret
//! bound with its limit rate, and the fully computable fixed-rate variants.
//!
//! The crate is `no_std`-compatible (`alloc` required); all transcendental
//! math goes through [`libm`] so results do not depend on whether the `std`
//! feature is enabled. Companion tooling (replication harness, CLI, CSV/SVG
//! emission) lives in the `kg-lab` crate.
//!
//! Module map:
//! - [`normal`]: standard-normal kernel, the improvement function
//!   f(x) = x·Φ(x) + φ(x), and underflow-safe log-domain tail arithmetic.
//! - [`instance`]: problem instances (means, known standard deviations) and
//!   their derived constants, plus the five-instance benchmark catalog.
//! - [`rng`]: seeded, substream-partitioned randomness for replications.
//! - [`policy`]: posterior state, Bayesian updates, the knowledge-gradient
//!   acquisition and arm selection, and the full sequential run loop.
//! - [`bounds`]: every closed-form bound evaluated as a function of the
//!   round index, with validity and vacuousness surfaced as flags.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod instance;
pub mod normal;
pub mod policy;
pub mod rng;

pub use bounds::{
    asymptotic_profile, cr_rate_limit, cr_upper, fixed_rate_pe_bounds, fixed_rate_sr_bounds,
    pe_lower, pe_upper, probability_defect, pull_ratio_bounds, pull_ratio_set,
    sampling_rate_bounds, sr_lower, sr_upper, Alpha0, AsymptoticProfile, BoundSet, BoundsError,
    FactorSplit, PullRatioBounds, PullRatioEntry,
};
pub use instance::{catalog, BanditInstance, InstanceConstants, InstanceError, CATALOG_IDS};
pub use normal::{
    f_kg, f_neg_envelope, log_f_neg, norm_cdf, norm_cdf_log, norm_pdf, LogValue,
};
pub use policy::{run_kg, run_kg_diagnostic, validate_run, PolicyError, PosteriorState, RunTrace};
pub use rng::RngStream;

/// Thin wrappers over `libm` so the numeric code reads like ordinary float
/// math while staying identical between `std` and `no_std` builds.
pub(crate) mod fm {
    #[inline(always)]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[inline(always)]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    #[inline(always)]
    pub fn ln_1p(x: f64) -> f64 {
        libm::log1p(x)
    }
    #[inline(always)]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline(always)]
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
    #[inline(always)]
    pub fn erfc(x: f64) -> f64 {
        libm::erfc(x)
    }
    #[inline(always)]
    pub fn floor(x: f64) -> f64 {
        libm::floor(x)
    }
}
