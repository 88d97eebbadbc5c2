//! Problem instances: arm means, known standard deviations, and the derived
//! constants every bound formula consumes. Instances are immutable value
//! objects; the constants are computed once at construction.

use alloc::vec::Vec;

use crate::fm;
use crate::rng::RngStream;

/// Validation failures when building a [`BanditInstance`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("means and stds have different lengths ({means} vs {stds})")]
    LengthMismatch { means: usize, stds: usize },
    #[error("an instance needs at least two arms, got {0}")]
    TooFewArms(usize),
    #[error("arm {0} has a non-finite parameter")]
    NonFinite(usize),
    #[error("arm {0} has non-positive standard deviation")]
    NonPositiveStd(usize),
    #[error("arms {0} and {1} tie for the largest mean; the best arm must be unique")]
    NonUniqueBest(usize, usize),
    #[error("unknown catalog id {0}; valid ids are 1..=5")]
    UnknownCatalogId(u32),
}

/// Constants derived from an instance, cached alongside it.
///
/// `delta_min` scans all distinct pairs with a positive gap, not only gaps
/// to the best arm. `log_gap_term` caches max{ln(27·δ_max³/(8·σ_min⁴)), 0},
/// which appears inside every pull-ratio formula.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceConstants {
    pub best: usize,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub delta_max: f64,
    pub delta_min: f64,
    pub second_best_mean: f64,
    pub gaps: Vec<f64>,
    pub log_gap_term: f64,
}

/// A set of k ≥ 2 Gaussian arms with unknown means and known variances.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    stds: Vec<f64>,
    constants: InstanceConstants,
}

impl BanditInstance {
    /// Validates and builds an instance; rejects ties for the largest mean.
    pub fn new(means: Vec<f64>, stds: Vec<f64>) -> Result<BanditInstance, InstanceError> {
        if means.len() != stds.len() {
            return Err(InstanceError::LengthMismatch {
                means: means.len(),
                stds: stds.len(),
            });
        }
        if means.len() < 2 {
            return Err(InstanceError::TooFewArms(means.len()));
        }
        for (i, (&m, &s)) in means.iter().zip(&stds).enumerate() {
            if !m.is_finite() || !s.is_finite() {
                return Err(InstanceError::NonFinite(i));
            }
            if s <= 0.0 {
                return Err(InstanceError::NonPositiveStd(i));
            }
        }
        let mut best = 0;
        for i in 1..means.len() {
            if means[i] > means[best] {
                best = i;
            }
        }
        if let Some(tie) = (0..means.len()).find(|&i| i != best && means[i] == means[best]) {
            return Err(InstanceError::NonUniqueBest(best.min(tie), best.max(tie)));
        }
        let constants = derive_constants(&means, &stds, best);
        Ok(BanditInstance {
            means,
            stds,
            constants,
        })
    }

    /// Number of arms.
    #[inline]
    pub fn k(&self) -> usize {
        self.means.len()
    }

    #[inline]
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    #[inline]
    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    /// Index of the unique best arm.
    #[inline]
    pub fn best(&self) -> usize {
        self.constants.best
    }

    #[inline]
    pub fn constants(&self) -> &InstanceConstants {
        &self.constants
    }

    /// Draws one reward from `N(μ_arm, σ_arm²)`, advancing the stream.
    ///
    /// Panics if `arm` is out of range.
    #[inline]
    pub fn sample_reward(&self, arm: usize, rng: &mut RngStream) -> f64 {
        self.means[arm] + self.stds[arm] * rng.standard_normal()
    }
}

fn derive_constants(means: &[f64], stds: &[f64], best: usize) -> InstanceConstants {
    let k = means.len();
    let mut sigma_max = stds[0];
    let mut sigma_min = stds[0];
    for &s in &stds[1..] {
        sigma_max = sigma_max.max(s);
        sigma_min = sigma_min.min(s);
    }
    let mut delta_max: f64 = 0.0;
    let mut delta_min = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            let gap = (means[i] - means[j]).abs();
            delta_max = delta_max.max(gap);
            if gap > 0.0 {
                delta_min = delta_min.min(gap);
            }
        }
    }
    let second_best_mean = means
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .map(|(_, &m)| m)
        .fold(f64::NEG_INFINITY, f64::max);
    let gaps = means.iter().map(|&m| means[best] - m).collect();
    let d3 = delta_max * delta_max * delta_max;
    let s4 = sigma_min * sigma_min * sigma_min * sigma_min;
    let log_gap_term = fm::ln(27.0 * d3 / (8.0 * s4)).max(0.0);
    InstanceConstants {
        best,
        sigma_max,
        sigma_min,
        delta_max,
        delta_min,
        second_best_mean,
        gaps,
        log_gap_term,
    }
}

/// Catalog ids accepted by [`catalog`].
pub const CATALOG_IDS: core::ops::RangeInclusive<u32> = 1..=5;

/// The five benchmark instances.
///
/// 1. k = 10, μ = (1,…,1,2), σ = 1
/// 2. k = 10, μ = (1×5, 2×4, 3), σ = (1×5, 2×4, 3)
/// 3. k = 10, μ = (5,…,5,10), σ = 1
/// 4. k = 10, μ = (1,…,1,2), σ = 2
/// 5. k = 20, μ = (1,…,1,2), σ = 1
pub fn catalog(id: u32) -> Result<BanditInstance, InstanceError> {
    let (means, stds): (Vec<f64>, Vec<f64>) = match id {
        1 => (pattern(&[(1.0, 9)], 2.0), uniform(1.0, 10)),
        2 => (
            pattern(&[(1.0, 5), (2.0, 4)], 3.0),
            pattern(&[(1.0, 5), (2.0, 4)], 3.0),
        ),
        3 => (pattern(&[(5.0, 9)], 10.0), uniform(1.0, 10)),
        4 => (pattern(&[(1.0, 9)], 2.0), uniform(2.0, 10)),
        5 => (pattern(&[(1.0, 19)], 2.0), uniform(1.0, 20)),
        other => return Err(InstanceError::UnknownCatalogId(other)),
    };
    BanditInstance::new(means, stds)
}

fn pattern(groups: &[(f64, usize)], last: f64) -> Vec<f64> {
    let mut v = Vec::new();
    for &(value, count) in groups {
        v.extend(core::iter::repeat_n(value, count));
    }
    v.push(last);
    v
}

fn uniform(value: f64, k: usize) -> Vec<f64> {
    core::iter::repeat_n(value, k).collect()
}
