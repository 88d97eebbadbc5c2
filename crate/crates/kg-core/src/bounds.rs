//! Closed-form evaluation of the finite-time analysis: the probability
//! defect q(·), two-sided envelopes on the pull ratios N_i/N_b and on the
//! sampling rates α_i, upper and lower bounds on the probability of error
//! and simple regret, the cumulative-regret bound and its limit rate, the
//! asymptotic allocation profile, and the fully computable fixed-rate
//! bounds under forced initial exploration.
//!
//! Every bound takes the round index `t` as an argument and reports
//! validity and vacuousness flags instead of trying to compute the
//! (uncomputable) threshold beyond which the statements are guaranteed;
//! whether a given `t` is inside the applicable regime is the caller's
//! interpretive burden.
//!
//! All probability-like outputs are carried as [`LogValue`]s: at t = 10⁹
//! the exponents reach ~10⁷ and must never round-trip through linear
//! space. Probability prefactors `[1−q]^k` and `[1−q]^{2k}` are clamped
//! into [0, 1]; q ≥ 1 zeroes the lower bounds and raises the vacuous flag.

use alloc::vec::Vec;

use crate::fm;
use crate::instance::BanditInstance;
use crate::normal::LogValue;

const LN_2PI: f64 = 1.8378770664093455;
const LN_PI: f64 = 1.1447298858494002;

/// Failures when evaluating the fixed-rate bounds.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("alpha0 must satisfy 0 < alpha0 <= 1/k")]
    Alpha0OutOfRange,
    #[error("budget too small: floor(alpha0 * n) must be at least 1")]
    BudgetTooSmall,
}

/// The probability defect q(s) = 4·σ_max·k^{−1/8}·s^{−1/8}·
/// exp{−k^{1/4}·s^{1/4}/(8·σ_max²)}.
///
/// May exceed 1 for small `s`; callers clamp where a probability is needed.
pub fn probability_defect(inst: &BanditInstance, s: f64) -> f64 {
    assert!(s > 0.0, "probability_defect: s must be positive");
    let k = inst.k() as f64;
    let sm = inst.constants().sigma_max;
    4.0 * sm
        * fm::powf(k, -0.125)
        * fm::powf(s, -0.125)
        * fm::exp(-fm::powf(k, 0.25) * fm::powf(s, 0.25) / (8.0 * sm * sm))
}

/// Confidence level `[1−q(3t/4)]^k` clamped into [0, 1], plus the vacuous
/// flag (`q(3t/4) ≥ 1`).
pub fn confidence_level(inst: &BanditInstance, t: u64) -> (f64, bool) {
    let q = probability_defect(inst, 0.75 * t as f64);
    let base = (1.0 - q).max(0.0);
    (powi(base, inst.k() as u32), q >= 1.0)
}

/// Two-sided envelope on the pull ratio N_i/N_b for one non-best arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullRatioEntry {
    pub lower: f64,
    pub upper: f64,
    /// All four constituent formulas are positive and well-defined at this t.
    pub valid: bool,
}

/// Pull-ratio envelopes for every arm at one round.
///
/// Entries at the best arm are zero padding so that `1 + sum` expressions
/// range over the non-best arms automatically.
#[derive(Debug, Clone, PartialEq)]
pub struct PullRatioBounds {
    pub t: u64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub valid: bool,
}

impl PullRatioBounds {
    /// Σ_{i≠b} of the lower envelope.
    pub fn sum_lower(&self) -> f64 {
        self.lower.iter().sum()
    }

    /// Σ_{i≠b} of the upper envelope.
    pub fn sum_upper(&self) -> f64 {
        self.upper.iter().sum()
    }
}

/// Shared per-round pieces of the four pull-ratio formulas.
struct RatioTerms {
    /// t^{−1/4}
    t4: f64,
    /// (3t/4)^{−1/4}
    tq4: f64,
    /// 1 + (t/k)^{−3/4}
    corr1: f64,
    /// (1 + (3t/4k)^{−3/4})²
    corr2: f64,
    /// 8k/√t + 2k·L/t
    rem1: f64,
    /// 16k/√(3t) + 8k·L/(3t)
    rem2: f64,
    /// μ_b − max_{j≠b} μ_j
    top_gap: f64,
}

impl RatioTerms {
    fn new(inst: &BanditInstance, t: u64) -> RatioTerms {
        let tf = t as f64;
        let k = inst.k() as f64;
        let l = inst.constants().log_gap_term;
        RatioTerms {
            t4: fm::powf(tf, -0.25),
            tq4: fm::powf(0.75 * tf, -0.25),
            corr1: 1.0 + fm::powf(tf / k, -0.75),
            corr2: {
                let c = 1.0 + fm::powf(0.75 * tf / k, -0.75);
                c * c
            },
            rem1: 8.0 * k / fm::sqrt(tf) + 2.0 * k * l / tf,
            rem2: 16.0 * k / fm::sqrt(3.0 * tf) + 8.0 * k * l / (3.0 * tf),
            top_gap: inst.means()[inst.best()] - inst.constants().second_best_mean,
        }
    }
}

/// Envelope on N_i/N_b for non-best arm `i` at round `t`: the minimum of
/// the two lower formulas and the maximum of the two upper formulas.
///
/// Panics if `i` is the best arm.
pub fn pull_ratio_bounds(inst: &BanditInstance, i: usize, t: u64) -> PullRatioEntry {
    assert!(
        i != inst.best(),
        "pull_ratio_bounds: ratios are defined against the best arm"
    );
    let terms = RatioTerms::new(inst, t);
    entry(inst, &terms, i)
}

fn entry(inst: &BanditInstance, r: &RatioTerms, i: usize) -> PullRatioEntry {
    let sb = inst.stds()[inst.best()];
    let si = inst.stds()[i];
    let gap = inst.constants().gaps[i];
    let top = r.top_gap;

    let lo1 = (top - r.tq4) / (r.corr2 * sb)
        / fm::sqrt((gap + r.tq4) * (gap + r.tq4) / (si * si) + r.rem2);
    let lo2 = (top - r.t4) / (r.corr1 * sb)
        / fm::sqrt((gap + r.t4) * (gap + r.t4) / (si * si) + r.rem1);
    let up1 =
        r.corr1 * si / (gap - r.t4) * fm::sqrt((top + r.t4) * (top + r.t4) / (sb * sb) + r.rem1);
    let up2 = r.corr2 * si / (gap - r.tq4)
        * fm::sqrt((top + r.tq4) * (top + r.tq4) / (sb * sb) + r.rem2);

    let valid = top - r.tq4 > 0.0 && top - r.t4 > 0.0 && gap - r.tq4 > 0.0 && gap - r.t4 > 0.0;
    PullRatioEntry {
        lower: lo1.min(lo2),
        upper: up1.max(up2),
        valid,
    }
}

/// Pull-ratio envelopes for all arms at round `t`.
pub fn pull_ratio_set(inst: &BanditInstance, t: u64) -> PullRatioBounds {
    let terms = RatioTerms::new(inst, t);
    let mut lower = Vec::with_capacity(inst.k());
    let mut upper = Vec::with_capacity(inst.k());
    let mut valid = true;
    for i in 0..inst.k() {
        if i == inst.best() {
            lower.push(0.0);
            upper.push(0.0);
            continue;
        }
        let e = entry(inst, &terms, i);
        valid = valid && e.valid;
        lower.push(e.lower);
        upper.push(e.upper);
    }
    PullRatioBounds {
        t,
        lower,
        upper,
        valid,
    }
}

/// Two-sided sampling-rate bounds per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingRateBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Sampling-rate envelope derived from the pull-ratio envelope:
/// α_b ∈ [1/(1+Σρ̄), 1/(1+Σρ̲)] and α_i ∈ [ρ̲_i/(1+Σρ̄), ρ̄_i/(1+Σρ̲)].
///
/// Returns `None` when the pull-ratio envelope is invalid at this round.
pub fn sampling_rate_bounds(
    inst: &BanditInstance,
    rho: &PullRatioBounds,
) -> Option<SamplingRateBounds> {
    if !rho.valid {
        return None;
    }
    let den_up = 1.0 + rho.sum_upper();
    let den_lo = 1.0 + rho.sum_lower();
    let mut lower = Vec::with_capacity(inst.k());
    let mut upper = Vec::with_capacity(inst.k());
    for i in 0..inst.k() {
        if i == inst.best() {
            lower.push(1.0 / den_up);
            upper.push(1.0 / den_lo);
        } else {
            lower.push(rho.lower[i] / den_up);
            upper.push(rho.upper[i] / den_lo);
        }
    }
    Some(SamplingRateBounds { lower, upper })
}

/// Worst-case probability-of-error bound at round `t`, log domain.
///
/// Sum of four term families: the Gaussian tails of the best arm and of
/// each non-best arm under the in-envelope pull counts, plus the matching
/// escape terms weighted by `1 − [1−q(3t/4)]^k` under the guaranteed
/// (t/k)^{3/4} pull floor. `None` when the pull-ratio envelope is invalid.
pub fn pe_upper(inst: &BanditInstance, rho: &PullRatioBounds) -> Option<LogValue> {
    worst_case_bound(inst, rho, 0.0)
}

/// Worst-case simple-regret bound: the probability-of-error terms, each
/// multiplied by δ_max.
pub fn sr_upper(inst: &BanditInstance, rho: &PullRatioBounds) -> Option<LogValue> {
    worst_case_bound(inst, rho, fm::ln(inst.constants().delta_max))
}

fn worst_case_bound(
    inst: &BanditInstance,
    rho: &PullRatioBounds,
    scale_log: f64,
) -> Option<LogValue> {
    if !rho.valid {
        return None;
    }
    let t = rho.t as f64;
    let k = inst.k() as f64;
    let d = inst.constants().delta_min;
    let sb = inst.stds()[inst.best()];
    let one_sup = 1.0 + rho.sum_upper();
    let (conf, _) = confidence_level(inst, rho.t);
    let bracket = (1.0 - conf).clamp(0.0, 1.0);
    let t34 = fm::powf(t, 0.75);
    let k34 = fm::powf(k, 0.75);

    let mut terms = Vec::with_capacity(2 * inst.k());
    terms.push(LogValue::from_log(
        scale_log + fm::ln(sb) + 0.5 * fm::ln(2.0 * one_sup)
            - fm::ln(d)
            - 0.5 * (LN_PI + fm::ln(t))
            - d * d * t / (8.0 * sb * sb * one_sup),
    ));
    if bracket > 0.0 {
        terms.push(LogValue::from_log(
            scale_log + 0.5 * core::f64::consts::LN_2 + 0.375 * fm::ln(k) + fm::ln(sb)
                - 0.5 * LN_PI
                - fm::ln(d)
                - 0.375 * fm::ln(t)
                + fm::ln(bracket)
                - d * d * t34 / (8.0 * sb * sb * k34),
        ));
    }
    for i in 0..inst.k() {
        if i == inst.best() {
            continue;
        }
        let si = inst.stds()[i];
        let a = inst.constants().gaps[i] - d / 2.0;
        terms.push(LogValue::from_log(
            scale_log + fm::ln(si) + 0.5 * fm::ln(one_sup)
                - fm::ln(a)
                - 0.5 * (LN_2PI + fm::ln(rho.lower[i]) + fm::ln(t))
                - a * a * rho.lower[i] * t / (2.0 * si * si * one_sup),
        ));
        if bracket > 0.0 {
            terms.push(LogValue::from_log(
                scale_log + 0.375 * fm::ln(k) + fm::ln(si) + fm::ln(bracket)
                    - 0.5 * LN_2PI
                    - fm::ln(a)
                    - 0.375 * fm::ln(t)
                    - a * a * t34 / (2.0 * si * si * k34),
            ));
        }
    }
    Some(LogValue::sum(&terms))
}

/// The two equivalent groupings of the best-case bound's leading factors.
///
/// The bound is a product of two Gaussian-tail factors; a factor of t can
/// be written either as √t·√t split across them or as t on the second
/// factor alone. The product is identical — both groupings are exposed so
/// the transcriptions can be checked against each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorSplit {
    /// √t on each factor.
    SymmetricSqrt,
    /// The full t on the second factor.
    LinearNumerator,
}

/// Best-case probability-of-error bound at round `t`, log domain, using
/// the [`FactorSplit::SymmetricSqrt`] grouping.
///
/// Returns zero when `q(3t/4) ≥ 1` (the vacuous regime), and `None` when
/// the pull-ratio envelope is invalid.
pub fn pe_lower(inst: &BanditInstance, rho: &PullRatioBounds) -> Option<LogValue> {
    pe_lower_with(inst, rho, FactorSplit::SymmetricSqrt)
}

/// [`pe_lower`] with an explicit factor grouping.
pub fn pe_lower_with(
    inst: &BanditInstance,
    rho: &PullRatioBounds,
    split: FactorSplit,
) -> Option<LogValue> {
    if !rho.valid {
        return None;
    }
    let t = rho.t as f64;
    let d = inst.constants().delta_min;
    let sb = inst.stds()[inst.best()];
    let one_sup = 1.0 + rho.sum_upper();
    let one_slo = 1.0 + rho.sum_lower();
    let q = probability_defect(inst, 0.75 * t);
    if q >= 1.0 {
        return Some(LogValue::ZERO);
    }
    let prefactor = 2.0 * inst.k() as f64 * fm::ln_1p(-q) - LN_2PI;

    let mut min_term = f64::INFINITY;
    for j in 0..inst.k() {
        if j == inst.best() {
            continue;
        }
        let sj = inst.stds()[j];
        let a = inst.constants().gaps[j] - d / 2.0;
        let u = d * d * rho.upper[j] * t / (4.0 * sj * sj * one_slo);
        let w = a * a * t / (sb * sb * one_slo);
        let (factor_a, factor_b) = match split {
            FactorSplit::SymmetricSqrt => (
                fm::ln(d / (2.0 * sj)) + 0.5 * (fm::ln(rho.lower[j]) + fm::ln(t) - fm::ln(one_sup))
                    - fm::ln_1p(u),
                fm::ln(a) + 0.5 * fm::ln(t) - fm::ln(sb) - 0.5 * fm::ln(one_sup) - fm::ln_1p(w),
            ),
            FactorSplit::LinearNumerator => (
                fm::ln(d / (2.0 * sj)) + 0.5 * (fm::ln(rho.lower[j]) - fm::ln(one_sup))
                    - fm::ln_1p(u),
                fm::ln(a) + fm::ln(t) - fm::ln(sb) - 0.5 * fm::ln(one_sup) - fm::ln_1p(w),
            ),
        };
        let exponent = -d * d * rho.upper[j] * t / (8.0 * sj * sj * one_slo)
            - a * a * t / (2.0 * sb * sb * one_slo);
        min_term = min_term.min(factor_a + factor_b + exponent);
    }
    Some(LogValue::from_log(prefactor + min_term))
}

/// Best-case simple-regret bound: δ_min times [`pe_lower`].
pub fn sr_lower(inst: &BanditInstance, rho: &PullRatioBounds) -> Option<LogValue> {
    sr_lower_with(inst, rho, FactorSplit::SymmetricSqrt)
}

/// [`sr_lower`] with an explicit factor grouping.
pub fn sr_lower_with(
    inst: &BanditInstance,
    rho: &PullRatioBounds,
    split: FactorSplit,
) -> Option<LogValue> {
    pe_lower_with(inst, rho, split).map(|v| {
        if v.is_zero() {
            v
        } else {
            v.scale(inst.constants().delta_min)
        }
    })
}

/// Cumulative-regret bound at round `t`:
/// `[Σ gap_i·ρ̄_i/(1+Σρ̲)]·t + k·Σ gap_i·q(3t/4)·t`.
pub fn cr_upper(inst: &BanditInstance, rho: &PullRatioBounds) -> Option<f64> {
    if !rho.valid {
        return None;
    }
    let t = rho.t as f64;
    let one_slo = 1.0 + rho.sum_lower();
    let mut weighted = 0.0;
    let mut gap_sum = 0.0;
    for i in 0..inst.k() {
        if i == inst.best() {
            continue;
        }
        weighted += inst.constants().gaps[i] * rho.upper[i];
        gap_sum += inst.constants().gaps[i];
    }
    Some(
        weighted / one_slo * t
            + inst.k() as f64 * gap_sum * probability_defect(inst, 0.75 * t) * t,
    )
}

/// Limit of R_t/t:
/// `Σ_{i≠b} σ_i / (σ_b/(μ_b − max_{j≠b} μ_j) + Σ_{i≠b} σ_i/gap_i)`.
pub fn cr_rate_limit(inst: &BanditInstance) -> f64 {
    let sb = inst.stds()[inst.best()];
    let top_gap = inst.means()[inst.best()] - inst.constants().second_best_mean;
    let mut num = 0.0;
    let mut den = sb / top_gap;
    for i in 0..inst.k() {
        if i == inst.best() {
            continue;
        }
        num += inst.stds()[i];
        den += inst.stds()[i] / inst.constants().gaps[i];
    }
    num / den
}

/// Asymptotic allocation and rate profile.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticProfile {
    /// Limit of N_i/N_b per arm; 1 at the best arm.
    pub ratio_to_best: Vec<f64>,
    /// Limit sampling rates, normalized to sum to 1.
    pub alpha_limits: Vec<f64>,
    /// Limit of R_t/t.
    pub cr_rate: f64,
    /// Limit of −log(upper PE bound)/t, from the dominant in-envelope terms.
    pub pe_upper_rate: f64,
    /// Limit of −log(lower PE bound)/t.
    pub pe_lower_rate: f64,
}

/// Asymptotic sample allocation `σ_i(μ_b − max_{j≠b}μ_j)/(σ_b·gap_i)`,
/// normalized limit rates, and the limit decay rates of the bounds.
pub fn asymptotic_profile(inst: &BanditInstance) -> AsymptoticProfile {
    let k = inst.k();
    let sb = inst.stds()[inst.best()];
    let tg = inst.means()[inst.best()] - inst.constants().second_best_mean;
    let d = inst.constants().delta_min;

    let mut ratio = Vec::with_capacity(k);
    for i in 0..k {
        if i == inst.best() {
            ratio.push(1.0);
        } else {
            ratio.push(inst.stds()[i] * tg / (sb * inst.constants().gaps[i]));
        }
    }
    let total: f64 = ratio.iter().sum();
    let alpha_limits: Vec<f64> = ratio.iter().map(|r| r / total).collect();

    // 1 + Σ_{i≠b} ratio_i = total, since ratio_b = 1.
    let den = total;
    let mut pe_upper_rate = d * d / (8.0 * sb * sb * den);
    let mut pe_lower_rate = f64::INFINITY;
    for i in 0..k {
        if i == inst.best() {
            continue;
        }
        let si = inst.stds()[i];
        let a = inst.constants().gaps[i] - d / 2.0;
        pe_upper_rate = pe_upper_rate.min(a * a * ratio[i] / (2.0 * si * si * den));
        pe_lower_rate = pe_lower_rate
            .min(d * d * ratio[i] / (8.0 * si * si * den) + a * a / (2.0 * sb * sb * den));
    }

    AsymptoticProfile {
        ratio_to_best: ratio,
        alpha_limits,
        cr_rate: cr_rate_limit(inst),
        pe_upper_rate,
        pe_lower_rate,
    }
}

/// Forced-exploration floor α₀, either exact as a ratio or as a float.
///
/// The floor ⌊α₀·n⌋ is taken on integers for the exact form; the float
/// form floors the nearest-double product and carries the usual half-ulp
/// caveat near integer boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha0 {
    Exact { num: u64, den: u64 },
    Approx(f64),
}

impl Alpha0 {
    pub fn value(&self) -> f64 {
        match *self {
            Alpha0::Exact { num, den } => num as f64 / den as f64,
            Alpha0::Approx(v) => v,
        }
    }

    /// ⌊α₀·n⌋.
    pub fn floor_mul(&self, n: u64) -> u64 {
        match *self {
            Alpha0::Exact { num, den } => ((n as u128 * num as u128) / den as u128) as u64,
            Alpha0::Approx(v) => fm::floor(v * n as f64) as u64,
        }
    }
}

/// Fixed-rate probability-of-error bounds `(lower, upper)` for a budget of
/// `n` rounds with every sampling rate forced to at least α₀.
///
/// Requires `0 < α₀ ≤ 1/k` and `⌊α₀·n⌋ ≥ 1`.
pub fn fixed_rate_pe_bounds(
    inst: &BanditInstance,
    n: u64,
    alpha0: &Alpha0,
) -> Result<(LogValue, LogValue), BoundsError> {
    fixed_rate_bounds(inst, n, alpha0, 0.0, 0.0)
}

/// Fixed-rate simple-regret bounds: the upper display carries δ_max, the
/// lower δ_min, on the probability-of-error displays.
pub fn fixed_rate_sr_bounds(
    inst: &BanditInstance,
    n: u64,
    alpha0: &Alpha0,
) -> Result<(LogValue, LogValue), BoundsError> {
    fixed_rate_bounds(
        inst,
        n,
        alpha0,
        fm::ln(inst.constants().delta_min),
        fm::ln(inst.constants().delta_max),
    )
}

fn fixed_rate_bounds(
    inst: &BanditInstance,
    n: u64,
    alpha0: &Alpha0,
    lower_scale_log: f64,
    upper_scale_log: f64,
) -> Result<(LogValue, LogValue), BoundsError> {
    let k = inst.k() as f64;
    let a0 = alpha0.value();
    if !(a0 > 0.0 && a0 <= 1.0 / k) {
        return Err(BoundsError::Alpha0OutOfRange);
    }
    let m = alpha0.floor_mul(n);
    if m == 0 {
        return Err(BoundsError::BudgetTooSmall);
    }
    let mf = m as f64;
    let nf = n as f64;
    let d = inst.constants().delta_min;
    let sb = inst.stds()[inst.best()];

    let mut upper_terms = Vec::with_capacity(inst.k());
    upper_terms.push(LogValue::from_log(
        upper_scale_log + 0.5 * core::f64::consts::LN_2 + fm::ln(sb)
            - 0.5 * (LN_PI + fm::ln(mf))
            - fm::ln(d)
            - d * d * mf / (8.0 * sb * sb),
    ));
    let mut min_lower = f64::INFINITY;
    for j in 0..inst.k() {
        if j == inst.best() {
            continue;
        }
        let sj = inst.stds()[j];
        let a = inst.constants().gaps[j] - d / 2.0;
        upper_terms.push(LogValue::from_log(
            upper_scale_log + fm::ln(sj)
                - 0.5 * (LN_2PI + fm::ln(mf))
                - fm::ln(a)
                - a * a * mf / (2.0 * sj * sj),
        ));
        let lower = fm::ln(d) - fm::ln(2.0 * sj) - 0.5 * LN_2PI
            - fm::ln_1p(d * d * nf / (4.0 * sj * sj))
            + fm::ln(a) + fm::ln(mf)
            - fm::ln(sb)
            - 0.5 * LN_2PI
            - fm::ln_1p(a * a * nf / (sb * sb))
            - (d * d / (8.0 * sj * sj) + a * a / (2.0 * sb * sb)) * nf;
        min_lower = min_lower.min(lower);
    }
    Ok((
        LogValue::from_log(lower_scale_log + min_lower),
        LogValue::sum(&upper_terms),
    ))
}

/// Every analytical bound evaluated at one round.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    pub t: u64,
    pub rho: PullRatioBounds,
    pub alpha: Option<SamplingRateBounds>,
    pub pe_upper: Option<LogValue>,
    pub pe_lower: Option<LogValue>,
    pub sr_upper: Option<LogValue>,
    pub sr_lower: Option<LogValue>,
    pub cr_upper: Option<f64>,
    /// `[1−q(3t/4)]^k`, clamped into [0, 1].
    pub confidence: f64,
    /// `q(3t/4) ≥ 1`: the probabilistic statements carry no content here.
    pub vacuous: bool,
}

impl BoundSet {
    /// Evaluates the full bound family at round `t`.
    pub fn evaluate(inst: &BanditInstance, t: u64) -> BoundSet {
        let rho = pull_ratio_set(inst, t);
        let (confidence, vacuous) = confidence_level(inst, t);
        BoundSet {
            t,
            alpha: sampling_rate_bounds(inst, &rho),
            pe_upper: pe_upper(inst, &rho),
            pe_lower: pe_lower(inst, &rho),
            sr_upper: sr_upper(inst, &rho),
            sr_lower: sr_lower(inst, &rho),
            cr_upper: cr_upper(inst, &rho),
            confidence,
            vacuous,
            rho,
        }
    }
}

fn powi(x: f64, n: u32) -> f64 {
    let mut base = x;
    let mut exp = n;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}
