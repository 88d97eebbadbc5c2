//! The knowledge-gradient sequential policy: posterior state under the
//! non-informative prior, the tractable acquisition value, arm selection,
//! recommendation, and the full run loop with its mandatory initial stage.
//!
//! Round counting convention: `round` is the total number of pulls taken so
//! far, including the initial stage, so Σᵢ Nᵢ = round at all times and the
//! bound formulas can be applied to checkpoint rounds directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::BanditInstance;
use crate::normal::{log_f_neg, LogValue};
use crate::rng::RngStream;
use crate::fm;

/// Configuration failures for the run loop.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolicyError {
    #[error("the initial stage needs n0 >= 1 pulls per arm")]
    ZeroInitialPulls,
    #[error("horizon {horizon} is below the initial stage budget k*n0 = {needed}")]
    HorizonTooSmall { horizon: u64, needed: u64 },
    #[error("checkpoints must be strictly increasing and lie within [k*n0, horizon]")]
    InvalidCheckpoints,
}

/// Per-arm posterior under the non-informative prior, plus pull counts.
///
/// Two mean accumulators are kept deliberately: `post_mean` follows the
/// literal Bayesian update arithmetic, while `sample_mean` is a streaming
/// (Welford) sample mean over the same rewards. They agree algebraically;
/// comparing them bounds the accumulated floating-point drift without
/// retaining reward logs. `post_precision` is recomputed from the pull
/// count each update so λ⁻² = N/σ² holds exactly, not merely to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorState {
    post_mean: Vec<f64>,
    post_precision: Vec<f64>,
    sample_mean: Vec<f64>,
    pulls: Vec<u64>,
    round: u64,
}

impl PosteriorState {
    /// Runs the initial stage: every arm pulled exactly `n0` times.
    pub fn init(
        inst: &BanditInstance,
        n0: u64,
        rng: &mut RngStream,
    ) -> Result<PosteriorState, PolicyError> {
        if n0 == 0 {
            return Err(PolicyError::ZeroInitialPulls);
        }
        let mut state = PosteriorState::empty(inst.k());
        for arm in 0..inst.k() {
            for _ in 0..n0 {
                let x = inst.sample_reward(arm, rng);
                state.update(inst, arm, x);
            }
        }
        Ok(state)
    }

    fn empty(k: usize) -> PosteriorState {
        PosteriorState {
            post_mean: vec![0.0; k],
            post_precision: vec![0.0; k],
            sample_mean: vec![0.0; k],
            pulls: vec![0; k],
            round: 0,
        }
    }

    /// Absorbs one reward for `arm`: posterior mean via the precision-weighted
    /// update, precision recomputed as N/σ², other arms untouched.
    pub fn update(&mut self, inst: &BanditInstance, arm: usize, reward: f64) {
        let var = inst.stds()[arm] * inst.stds()[arm];
        let inv_var = 1.0 / var;
        let prec = self.post_precision[arm];
        self.post_mean[arm] = if prec == 0.0 {
            // Non-informative prior: the first sample is absorbed whole.
            reward
        } else {
            (prec * self.post_mean[arm] + inv_var * reward) / (prec + inv_var)
        };
        self.pulls[arm] += 1;
        self.round += 1;
        self.post_precision[arm] = self.pulls[arm] as f64 / var;
        let n = self.pulls[arm] as f64;
        self.sample_mean[arm] += (reward - self.sample_mean[arm]) / n;
    }

    /// Acquisition value of pulling `arm` once more, as a log magnitude:
    /// v = ζ·f(−|θ_arm − max_{j≠arm} θ_j| / ζ) with
    /// ζ² = 1/λ⁻² − 1/(λ⁻² + σ⁻²).
    ///
    /// The precision form of ζ² avoids subtracting near-equal variances
    /// when pulls are few; the log domain keeps v finite even when the
    /// posterior gap is hundreds of ζ's wide.
    ///
    /// Panics if `arm` has never been pulled (ζ is undefined under the
    /// non-informative prior).
    pub fn kg_value(&self, inst: &BanditInstance, arm: usize) -> LogValue {
        let (top, top_val, second_val) = self.theta_top2();
        let other_max = if arm == top { second_val } else { top_val };
        self.kg_value_against(inst, arm, other_max)
    }

    fn kg_value_against(&self, inst: &BanditInstance, arm: usize, other_max: f64) -> LogValue {
        assert!(
            self.pulls[arm] > 0,
            "kg_value: arm {arm} has no pulls; the acquisition is undefined"
        );
        let prec = self.post_precision[arm];
        let inv_var = 1.0 / (inst.stds()[arm] * inst.stds()[arm]);
        let zeta_sq = 1.0 / prec - 1.0 / (prec + inv_var);
        let zeta = fm::sqrt(zeta_sq);
        let gap = (self.post_mean[arm] - other_max).abs();
        LogValue::from_log(0.5 * fm::ln(zeta_sq) + log_f_neg(gap / zeta).log())
    }

    /// Largest and second-largest posterior means (lowest index wins ties).
    fn theta_top2(&self) -> (usize, f64, f64) {
        let mut top = 0;
        for i in 1..self.post_mean.len() {
            if self.post_mean[i] > self.post_mean[top] {
                top = i;
            }
        }
        let mut second = f64::NEG_INFINITY;
        for (i, &v) in self.post_mean.iter().enumerate() {
            if i != top && v > second {
                second = v;
            }
        }
        (top, self.post_mean[top], second)
    }

    /// Arm with the largest acquisition value; lowest index on ties.
    pub fn select_arm(&self, inst: &BanditInstance) -> usize {
        let (top, top_val, second_val) = self.theta_top2();
        let mut best = 0;
        let mut best_log = f64::NEG_INFINITY;
        for arm in 0..self.post_mean.len() {
            let other_max = if arm == top { second_val } else { top_val };
            let v = self.kg_value_against(inst, arm, other_max).log();
            if v > best_log {
                best_log = v;
                best = arm;
            }
        }
        best
    }

    /// Arm with the largest posterior mean; lowest index on ties.
    pub fn recommend(&self) -> usize {
        let mut best = 0;
        for i in 1..self.post_mean.len() {
            if self.post_mean[i] > self.post_mean[best] {
                best = i;
            }
        }
        best
    }

    /// Total pulls so far, initial stage included.
    #[inline]
    pub fn round(&self) -> u64 {
        self.round
    }

    #[inline]
    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    #[inline]
    pub fn post_means(&self) -> &[f64] {
        &self.post_mean
    }

    #[inline]
    pub fn post_precisions(&self) -> &[f64] {
        &self.post_precision
    }

    /// Independently accumulated streaming sample means.
    #[inline]
    pub fn sample_means(&self) -> &[f64] {
        &self.sample_mean
    }
}

/// One replication's record: pull counts and recommendations at a
/// checkpoint grid, plus the final recommendation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub n0: u64,
    pub horizon: u64,
    pub checkpoint_rounds: Vec<u64>,
    /// checkpoint-major: `pulls_at_checkpoints[c][arm]` = N_arm at round c.
    pub pulls_at_checkpoints: Vec<Vec<u64>>,
    pub recommendation_at_checkpoints: Vec<usize>,
    pub final_recommendation: usize,
}

/// Runs the initial stage then the knowledge-gradient loop until `horizon`
/// total pulls, recording counts and recommendations at each checkpoint.
///
/// `checkpoints` must be strictly increasing and contained in
/// `[k*n0, horizon]`.
pub fn run_kg(
    inst: &BanditInstance,
    horizon: u64,
    n0: u64,
    rng: &mut RngStream,
    checkpoints: &[u64],
) -> Result<RunTrace, PolicyError> {
    run_loop(inst, horizon, n0, rng, checkpoints, None).map(|(trace, _)| trace)
}

/// [`run_kg`] plus the final posterior state and per-arm reward logs, for
/// estimator audits. The plain runner never allocates reward storage.
pub fn run_kg_diagnostic(
    inst: &BanditInstance,
    horizon: u64,
    n0: u64,
    rng: &mut RngStream,
    checkpoints: &[u64],
) -> Result<(RunTrace, PosteriorState, Vec<Vec<f64>>), PolicyError> {
    let mut rewards: Vec<Vec<f64>> = vec![Vec::new(); inst.k()];
    let (trace, state) = run_loop(inst, horizon, n0, rng, checkpoints, Some(&mut rewards))?;
    Ok((trace, state, rewards))
}

/// Checks a run configuration without running it: n0 ≥ 1, the horizon
/// covers the initial stage, and checkpoints are strictly increasing
/// within `[k*n0, horizon]`.
pub fn validate_run(
    inst: &BanditInstance,
    horizon: u64,
    n0: u64,
    checkpoints: &[u64],
) -> Result<(), PolicyError> {
    if n0 == 0 {
        return Err(PolicyError::ZeroInitialPulls);
    }
    let start = inst.k() as u64 * n0;
    if horizon < start {
        return Err(PolicyError::HorizonTooSmall {
            horizon,
            needed: start,
        });
    }
    let in_range = checkpoints.iter().all(|&c| c >= start && c <= horizon);
    let increasing = checkpoints.windows(2).all(|w| w[0] < w[1]);
    if !in_range || !increasing {
        return Err(PolicyError::InvalidCheckpoints);
    }
    Ok(())
}

fn run_loop(
    inst: &BanditInstance,
    horizon: u64,
    n0: u64,
    rng: &mut RngStream,
    checkpoints: &[u64],
    mut reward_log: Option<&mut Vec<Vec<f64>>>,
) -> Result<(RunTrace, PosteriorState), PolicyError> {
    validate_run(inst, horizon, n0, checkpoints)?;

    // Initial stage. The reward log must see the same draws the state sees,
    // so it taps the update path rather than re-sampling.
    let mut state = PosteriorState::empty(inst.k());
    for arm in 0..inst.k() {
        for _ in 0..n0 {
            let x = inst.sample_reward(arm, rng);
            state.update(inst, arm, x);
            if let Some(log) = reward_log.as_deref_mut() {
                log[arm].push(x);
            }
        }
    }

    let mut trace = RunTrace {
        n0,
        horizon,
        checkpoint_rounds: checkpoints.to_vec(),
        pulls_at_checkpoints: Vec::with_capacity(checkpoints.len()),
        recommendation_at_checkpoints: Vec::with_capacity(checkpoints.len()),
        final_recommendation: 0,
    };
    let mut next_cp = 0;
    record_if_checkpoint(&state, checkpoints, &mut next_cp, &mut trace);

    while state.round() < horizon {
        let arm = state.select_arm(inst);
        let x = inst.sample_reward(arm, rng);
        state.update(inst, arm, x);
        if let Some(log) = reward_log.as_deref_mut() {
            log[arm].push(x);
        }
        record_if_checkpoint(&state, checkpoints, &mut next_cp, &mut trace);
    }

    trace.final_recommendation = state.recommend();
    Ok((trace, state))
}

fn record_if_checkpoint(
    state: &PosteriorState,
    checkpoints: &[u64],
    next_cp: &mut usize,
    trace: &mut RunTrace,
) {
    if *next_cp < checkpoints.len() && checkpoints[*next_cp] == state.round() {
        trace.pulls_at_checkpoints.push(state.pulls().to_vec());
        trace.recommendation_at_checkpoints.push(state.recommend());
        *next_cp += 1;
    }
}
