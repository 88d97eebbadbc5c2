//! Replication engine and estimators.
//!
//! Replications run in parallel, each on its own `(seed, replication)`
//! stream; results are folded in replication order by a single reducer, so
//! every estimate is bit-identical no matter how many workers run. The
//! worker count comes from `KG_LAB_THREADS` (0 or unset = automatic).
//!
//! Per checkpoint t the estimators are
//! - `pe_hat`: fraction of replications recommending a non-best arm, with
//!   binomial standard error;
//! - `sr_hat`: mean true gap μ_b − μ_J of the recommended arm;
//! - `cr_hat`: mean of Σ_{i≠b} gap_i·N_{i,t} — counts times true gaps, the
//!   exact quantity the cumulative-regret bound controls, rather than
//!   realized reward shortfalls;
//! - `alpha_hat`: mean sampling rate N_{i,t}/t per arm.

use kg_core::policy::validate_run;
use kg_core::{run_kg, BanditInstance, PolicyError, RngStream, RunTrace};
use rayon::prelude::*;

/// Replications per parallel batch; batches are folded in order.
const BATCH: u64 = 256;

/// Monte Carlo estimates over a checkpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSeries {
    pub checkpoint_rounds: Vec<u64>,
    pub pe_hat: Vec<f64>,
    pub pe_stderr: Vec<f64>,
    pub sr_hat: Vec<f64>,
    pub sr_stderr: Vec<f64>,
    pub cr_hat: Vec<f64>,
    pub cr_stderr: Vec<f64>,
    /// checkpoint-major: `alpha_hat[c][arm]`.
    pub alpha_hat: Vec<Vec<f64>>,
    pub alpha_stderr: Vec<Vec<f64>>,
    pub replications: u64,
    pub seed: u64,
    /// A single replication: standard errors are reported as zero.
    pub low_replication: bool,
}

/// Order-fixed accumulator; absorbing traces in replication order makes the
/// floating-point sums independent of scheduling.
struct Accumulator<'a> {
    inst: &'a BanditInstance,
    checkpoints: &'a [u64],
    count: u64,
    errors: Vec<u64>,
    gap_sum: Vec<f64>,
    gap_sumsq: Vec<f64>,
    cr_sum: Vec<f64>,
    cr_sumsq: Vec<f64>,
    alpha_sum: Vec<Vec<f64>>,
    alpha_sumsq: Vec<Vec<f64>>,
}

impl<'a> Accumulator<'a> {
    fn new(inst: &'a BanditInstance, checkpoints: &'a [u64]) -> Accumulator<'a> {
        let c = checkpoints.len();
        let k = inst.k();
        Accumulator {
            inst,
            checkpoints,
            count: 0,
            errors: vec![0; c],
            gap_sum: vec![0.0; c],
            gap_sumsq: vec![0.0; c],
            cr_sum: vec![0.0; c],
            cr_sumsq: vec![0.0; c],
            alpha_sum: vec![vec![0.0; k]; c],
            alpha_sumsq: vec![vec![0.0; k]; c],
        }
    }

    fn absorb(&mut self, trace: &RunTrace) {
        let gaps = &self.inst.constants().gaps;
        let best = self.inst.best();
        self.count += 1;
        for (c, &t) in self.checkpoints.iter().enumerate() {
            let rec = trace.recommendation_at_checkpoints[c];
            if rec != best {
                self.errors[c] += 1;
            }
            let gap = gaps[rec];
            self.gap_sum[c] += gap;
            self.gap_sumsq[c] += gap * gap;
            let mut regret = 0.0;
            for arm in 0..self.inst.k() {
                let pulls = trace.pulls_at_checkpoints[c][arm];
                regret += gaps[arm] * pulls as f64;
                let alpha = pulls as f64 / t as f64;
                self.alpha_sum[c][arm] += alpha;
                self.alpha_sumsq[c][arm] += alpha * alpha;
            }
            self.cr_sum[c] += regret;
            self.cr_sumsq[c] += regret * regret;
        }
    }

    fn finish(self, seed: u64) -> EstimateSeries {
        let reps = self.count;
        let n = reps as f64;
        let low = reps == 1;
        let stderr_of = |sum: f64, sumsq: f64| {
            if low {
                return 0.0;
            }
            let mean = sum / n;
            let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        let c = self.checkpoints.len();
        let mut series = EstimateSeries {
            checkpoint_rounds: self.checkpoints.to_vec(),
            pe_hat: Vec::with_capacity(c),
            pe_stderr: Vec::with_capacity(c),
            sr_hat: Vec::with_capacity(c),
            sr_stderr: Vec::with_capacity(c),
            cr_hat: Vec::with_capacity(c),
            cr_stderr: Vec::with_capacity(c),
            alpha_hat: Vec::with_capacity(c),
            alpha_stderr: Vec::with_capacity(c),
            replications: reps,
            seed,
            low_replication: low,
        };
        for ci in 0..c {
            let p = self.errors[ci] as f64 / n;
            series.pe_hat.push(p);
            series
                .pe_stderr
                .push(if low { 0.0 } else { (p * (1.0 - p) / n).sqrt() });
            series.sr_hat.push(self.gap_sum[ci] / n);
            series
                .sr_stderr
                .push(stderr_of(self.gap_sum[ci], self.gap_sumsq[ci]));
            series.cr_hat.push(self.cr_sum[ci] / n);
            series
                .cr_stderr
                .push(stderr_of(self.cr_sum[ci], self.cr_sumsq[ci]));
            series
                .alpha_hat
                .push(self.alpha_sum[ci].iter().map(|s| s / n).collect());
            series.alpha_stderr.push(
                (0..self.inst.k())
                    .map(|a| stderr_of(self.alpha_sum[ci][a], self.alpha_sumsq[ci][a]))
                    .collect(),
            );
        }
        series
    }
}

/// Runs `reps` independent replications and estimates all measures at the
/// checkpoint grid. Worker count from `KG_LAB_THREADS`.
pub fn run_replications(
    inst: &BanditInstance,
    n: u64,
    n0: u64,
    reps: u64,
    seed: u64,
    checkpoints: &[u64],
) -> Result<EstimateSeries, PolicyError> {
    run_replications_with_threads(inst, n, n0, reps, seed, checkpoints, worker_count_from_env())
}

/// [`run_replications`] with an explicit worker count (0 = automatic).
pub fn run_replications_with_threads(
    inst: &BanditInstance,
    n: u64,
    n0: u64,
    reps: u64,
    seed: u64,
    checkpoints: &[u64],
    threads: usize,
) -> Result<EstimateSeries, PolicyError> {
    assert!(reps >= 1, "need at least one replication");
    // Fail fast on a bad configuration before spinning up workers.
    validate_run(inst, n, n0, checkpoints)?;

    let pool = build_pool(threads);
    let mut acc = Accumulator::new(inst, checkpoints);
    let mut start = 0u64;
    while start < reps {
        let stop = (start + BATCH).min(reps);
        let batch: Vec<RunTrace> = pool.install(|| {
            (start..stop)
                .into_par_iter()
                .map(|r| {
                    run_kg(inst, n, n0, &mut RngStream::new(seed, r), checkpoints)
                        .expect("validated configuration")
                })
                .collect()
        });
        for trace in &batch {
            acc.absorb(trace);
        }
        start = stop;
    }
    Ok(acc.finish(seed))
}

/// Diagnostic variant that also returns the raw traces.
pub fn run_replications_with_traces(
    inst: &BanditInstance,
    n: u64,
    n0: u64,
    reps: u64,
    seed: u64,
    checkpoints: &[u64],
) -> Result<(EstimateSeries, Vec<RunTrace>), PolicyError> {
    let mut traces = Vec::with_capacity(reps as usize);
    for r in 0..reps {
        traces.push(run_kg(
            inst,
            n,
            n0,
            &mut RngStream::new(seed, r),
            checkpoints,
        )?);
    }
    Ok((estimate_from_traces(inst, checkpoints, &traces, seed), traces))
}

/// Recomputes the estimators from raw traces; the result is bit-identical
/// to what [`run_replications`] produced from the same traces.
pub fn estimate_from_traces(
    inst: &BanditInstance,
    checkpoints: &[u64],
    traces: &[RunTrace],
    seed: u64,
) -> EstimateSeries {
    let mut acc = Accumulator::new(inst, checkpoints);
    for trace in traces {
        acc.absorb(trace);
    }
    acc.finish(seed)
}

/// The figure transforms: −log(e_t)/t, −log(r_t)/t, R_t/t. Zero estimates
/// become `None` gaps rather than infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedSeries {
    pub checkpoint_rounds: Vec<u64>,
    pub pe_rate: Vec<Option<f64>>,
    pub sr_rate: Vec<Option<f64>>,
    pub cr_rate: Vec<f64>,
}

pub fn estimate_transforms(series: &EstimateSeries) -> TransformedSeries {
    let rate = |v: f64, t: u64| {
        if v > 0.0 {
            Some(-v.ln() / t as f64)
        } else {
            None
        }
    };
    TransformedSeries {
        checkpoint_rounds: series.checkpoint_rounds.clone(),
        pe_rate: series
            .pe_hat
            .iter()
            .zip(&series.checkpoint_rounds)
            .map(|(&p, &t)| rate(p, t))
            .collect(),
        sr_rate: series
            .sr_hat
            .iter()
            .zip(&series.checkpoint_rounds)
            .map(|(&r, &t)| rate(r, t))
            .collect(),
        cr_rate: series
            .cr_hat
            .iter()
            .zip(&series.checkpoint_rounds)
            .map(|(&c, &t)| c / t as f64)
            .collect(),
    }
}

/// Concentration tail bound for the mean of m Gaussian draws:
/// `(2σ/(√m·ε))·exp(−m·ε²/(2σ²))`.
pub fn gaussian_mean_tail_bound(sigma: f64, m: u64, eps: f64) -> f64 {
    assert!(sigma > 0.0 && m >= 1, "need σ > 0 and m >= 1");
    assert!(eps > 0.0, "tail width ε must be positive");
    let mf = m as f64;
    2.0 * sigma / (mf.sqrt() * eps) * (-mf * eps * eps / (2.0 * sigma * sigma)).exp()
}

/// Empirical exceedance frequency of |sample mean − μ| ≥ ε next to its
/// analytical tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationCheck {
    pub empirical: f64,
    pub bound: f64,
    pub stderr: f64,
}

/// Simulates `reps` sample means of `m` Gaussian draws and counts how often
/// the mean strays at least `eps` from the truth (location-invariant, so
/// the draws are centered).
pub fn concentration_check(
    sigma: f64,
    m: u64,
    eps: f64,
    reps: u64,
    seed: u64,
) -> ConcentrationCheck {
    let bound = gaussian_mean_tail_bound(sigma, m, eps);
    let mut exceed = 0u64;
    for r in 0..reps {
        let mut rng = RngStream::new(seed, r);
        let mut sum = 0.0;
        for _ in 0..m {
            sum += sigma * rng.standard_normal();
        }
        if (sum / m as f64).abs() >= eps {
            exceed += 1;
        }
    }
    let p = exceed as f64 / reps as f64;
    ConcentrationCheck {
        empirical: p,
        bound,
        stderr: (p * (1.0 - p) / reps as f64).sqrt(),
    }
}

/// Worker cap from `KG_LAB_THREADS`; 0 or unset means automatic.
pub fn worker_count_from_env() -> usize {
    std::env::var("KG_LAB_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn build_pool(threads: usize) -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if threads > 0 {
        builder = builder.num_threads(threads);
    }
    builder.build().expect("thread pool construction")
}
