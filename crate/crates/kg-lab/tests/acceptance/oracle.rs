//! Independent second transcription of every analytical formula, used only
//! to cross-check the library implementation. Deliberately written in a
//! different style: everything is recomputed from the raw means/stds on
//! each call, expressions are composed as single formulas, and the math
//! goes through `std`'s float methods instead of the library's kernel.

/// Raw instance view; derived constants are recomputed on demand.
pub struct Inst {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Inst {
    pub fn k(&self) -> usize {
        self.means.len()
    }

    pub fn best(&self) -> usize {
        let mut b = 0;
        for i in 1..self.means.len() {
            if self.means[i] > self.means[b] {
                b = i;
            }
        }
        b
    }

    fn mu_b(&self) -> f64 {
        self.means[self.best()]
    }

    fn second(&self) -> f64 {
        let b = self.best();
        self.means
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != b)
            .map(|(_, &m)| m)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn smax(&self) -> f64 {
        self.stds.iter().cloned().fold(0.0, f64::max)
    }

    fn smin(&self) -> f64 {
        self.stds.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    fn dmax(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.k() {
            for j in 0..self.k() {
                d = d.max((self.means[i] - self.means[j]).abs());
            }
        }
        d
    }

    fn dmin(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.k() {
            for j in 0..self.k() {
                let g = (self.means[i] - self.means[j]).abs();
                if g > 0.0 {
                    d = d.min(g);
                }
            }
        }
        d
    }

    /// max{ln(27·δ_max³/(8·σ_min⁴)), 0}
    fn lterm(&self) -> f64 {
        (27.0 * self.dmax().powi(3) / (8.0 * self.smin().powi(4)))
            .ln()
            .max(0.0)
    }
}

pub fn q(inst: &Inst, s: f64) -> f64 {
    let k = inst.k() as f64;
    let sm = inst.smax();
    4.0 * sm / (k.powf(0.125) * s.powf(0.125))
        * (-(k.powf(0.25) * s.powf(0.25)) / (8.0 * sm * sm)).exp()
}

/// The four pull-ratio formulas; returns (min of lowers, max of uppers).
pub fn rho(inst: &Inst, i: usize, t: f64) -> (f64, f64) {
    let k = inst.k() as f64;
    let b = inst.best();
    let sb = inst.stds[b];
    let si = inst.stds[i];
    let top = inst.mu_b() - inst.second();
    let gap = inst.mu_b() - inst.means[i];
    let l = inst.lterm();
    let tq = 0.75 * t;

    let lo1 = (top - tq.powf(-0.25)) / ((1.0 + (tq / k).powf(-0.75)).powi(2) * sb)
        * ((gap + tq.powf(-0.25)).powi(2) / (si * si)
            + 16.0 * k / (3.0 * t).sqrt()
            + 8.0 * k * l / (3.0 * t))
        .powf(-0.5);
    let lo2 = (top - t.powf(-0.25)) / ((1.0 + (t / k).powf(-0.75)) * sb)
        * ((gap + t.powf(-0.25)).powi(2) / (si * si) + 8.0 * k / t.sqrt() + 2.0 * k * l / t)
            .powf(-0.5);
    let up1 = (1.0 + (t / k).powf(-0.75)) * si / (gap - t.powf(-0.25))
        * ((top + t.powf(-0.25)).powi(2) / (sb * sb) + 8.0 * k / t.sqrt() + 2.0 * k * l / t)
            .powf(0.5);
    let up2 = (1.0 + (tq / k).powf(-0.75)).powi(2) * si / (gap - tq.powf(-0.25))
        * ((top + tq.powf(-0.25)).powi(2) / (sb * sb)
            + 16.0 * k / (3.0 * t).sqrt()
            + 8.0 * k * l / (3.0 * t))
        .powf(0.5);
    (lo1.min(lo2), up1.max(up2))
}

fn rho_sums(inst: &Inst, t: f64) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let b = inst.best();
    let mut lows = vec![0.0; inst.k()];
    let mut ups = vec![0.0; inst.k()];
    for i in 0..inst.k() {
        if i != b {
            let (lo, up) = rho(inst, i, t);
            lows[i] = lo;
            ups[i] = up;
        }
    }
    let slo = lows.iter().sum();
    let sup = ups.iter().sum();
    (lows, ups, slo, sup)
}

/// Per-arm sampling-rate bounds (lower, upper).
pub fn alpha(inst: &Inst, t: f64) -> (Vec<f64>, Vec<f64>) {
    let (lows, ups, slo, sup) = rho_sums(inst, t);
    let b = inst.best();
    let mut lower = vec![0.0; inst.k()];
    let mut upper = vec![0.0; inst.k()];
    for i in 0..inst.k() {
        if i == b {
            lower[i] = 1.0 / (1.0 + sup);
            upper[i] = 1.0 / (1.0 + slo);
        } else {
            lower[i] = lows[i] / (1.0 + sup);
            upper[i] = ups[i] / (1.0 + slo);
        }
    }
    (lower, upper)
}

fn logsumexp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn bracket(inst: &Inst, t: f64) -> f64 {
    let qv = q(inst, 0.75 * t);
    (1.0 - (1.0 - qv).max(0.0).powi(inst.k() as i32)).clamp(0.0, 1.0)
}

/// log of the worst-case error-probability bound; `scale` multiplies every
/// term (1 for the error probability, δ_max for the simple regret).
pub fn log_upper(inst: &Inst, t: f64, scale: f64) -> f64 {
    let k = inst.k() as f64;
    let b = inst.best();
    let sb = inst.stds[b];
    let d = inst.dmin();
    let (lows, _ups, _slo, sup) = rho_sums(inst, t);
    let br = bracket(inst, t);
    let pi = std::f64::consts::PI;

    let mut terms = vec![
        (scale * sb * (2.0 * (1.0 + sup)).sqrt() / (d * (pi * t).sqrt())).ln()
            - d * d * t / (8.0 * sb * sb * (1.0 + sup)),
    ];
    if br > 0.0 {
        terms.push(
            (scale * 2.0f64.sqrt() * k.powf(0.375) * sb / (pi.sqrt() * d * t.powf(0.375)) * br)
                .ln()
                - d * d * t.powf(0.75) / (8.0 * sb * sb * k.powf(0.75)),
        );
    }
    for i in 0..inst.k() {
        if i == b {
            continue;
        }
        let si = inst.stds[i];
        let a = inst.mu_b() - inst.means[i] - d / 2.0;
        terms.push(
            (scale * si * (1.0 + sup).sqrt() / (a * (2.0 * pi * lows[i] * t).sqrt())).ln()
                - a * a * lows[i] * t / (2.0 * si * si * (1.0 + sup)),
        );
        if br > 0.0 {
            terms.push(
                (scale * k.powf(0.375) * si * br / ((2.0 * pi).sqrt() * a * t.powf(0.375))).ln()
                    - a * a * t.powf(0.75) / (2.0 * si * si * k.powf(0.75)),
            );
        }
    }
    logsumexp(&terms)
}

/// log of the best-case error-probability bound, or `None` in the vacuous
/// regime q(3t/4) ≥ 1. `scale` is 1 for the error probability, δ_min for
/// the simple regret.
pub fn log_lower(inst: &Inst, t: f64, scale: f64) -> Option<f64> {
    let k = inst.k() as f64;
    let b = inst.best();
    let sb = inst.stds[b];
    let d = inst.dmin();
    let qv = q(inst, 0.75 * t);
    if qv >= 1.0 {
        return None;
    }
    let (lows, ups, slo, sup) = rho_sums(inst, t);
    let pi = std::f64::consts::PI;
    let mut best = f64::INFINITY;
    for j in 0..inst.k() {
        if j == b {
            continue;
        }
        let sj = inst.stds[j];
        let a = inst.mu_b() - inst.means[j] - d / 2.0;
        let fa = (d / (2.0 * sj) * (lows[j] * t / (1.0 + sup)).sqrt()).ln()
            - (1.0 + d * d * ups[j] * t / (4.0 * sj * sj * (1.0 + slo))).ln();
        let fb = (a * t.sqrt() / (sb * (1.0 + sup).sqrt())).ln()
            - (1.0 + a * a * t / (sb * sb * (1.0 + slo))).ln();
        let ex = -d * d * ups[j] * t / (8.0 * sj * sj * (1.0 + slo))
            - a * a * t / (2.0 * sb * sb * (1.0 + slo));
        best = best.min(fa + fb + ex);
    }
    Some(scale.ln() + 2.0 * k * (1.0 - qv).ln() - (2.0 * pi).ln() + best)
}

pub fn cr_upper(inst: &Inst, t: f64) -> f64 {
    let b = inst.best();
    let (_lows, ups, slo, _sup) = rho_sums(inst, t);
    let mut weighted = 0.0;
    let mut gaps = 0.0;
    for i in 0..inst.k() {
        if i != b {
            weighted += (inst.mu_b() - inst.means[i]) * ups[i];
            gaps += inst.mu_b() - inst.means[i];
        }
    }
    weighted * t / (1.0 + slo) + inst.k() as f64 * gaps * q(inst, 0.75 * t) * t
}

pub fn cr_limit(inst: &Inst) -> f64 {
    let b = inst.best();
    let mut num = 0.0;
    let mut den = inst.stds[b] / (inst.mu_b() - inst.second());
    for i in 0..inst.k() {
        if i != b {
            num += inst.stds[i];
            den += inst.stds[i] / (inst.mu_b() - inst.means[i]);
        }
    }
    num / den
}

/// Limit pull ratios to the best arm (1 at the best arm itself).
pub fn ratios(inst: &Inst) -> Vec<f64> {
    let b = inst.best();
    (0..inst.k())
        .map(|i| {
            if i == b {
                1.0
            } else {
                inst.stds[i] * (inst.mu_b() - inst.second())
                    / (inst.stds[b] * (inst.mu_b() - inst.means[i]))
            }
        })
        .collect()
}

/// Fixed-rate bounds as (log lower, log upper) for floor count m = ⌊α₀·n⌋.
pub fn fixed_rate(inst: &Inst, n: u64, m: u64, scale_lo: f64, scale_up: f64) -> (f64, f64) {
    let b = inst.best();
    let sb = inst.stds[b];
    let d = inst.dmin();
    let mf = m as f64;
    let nf = n as f64;
    let pi = std::f64::consts::PI;

    let mut upper_terms = vec![
        (scale_up * 2.0f64.sqrt() * sb / ((pi * mf).sqrt() * d)).ln()
            - d * d * mf / (8.0 * sb * sb),
    ];
    let mut lower = f64::INFINITY;
    for j in 0..inst.k() {
        if j == b {
            continue;
        }
        let sj = inst.stds[j];
        let a = inst.mu_b() - inst.means[j] - d / 2.0;
        upper_terms.push(
            (scale_up * sj / ((2.0 * pi * mf).sqrt() * a)).ln() - a * a * mf / (2.0 * sj * sj),
        );
        let v = (d / (2.0 * (2.0 * pi).sqrt() * sj * (1.0 + d * d * nf / (4.0 * sj * sj)))
            * (a * mf / ((2.0 * pi).sqrt() * sb * (1.0 + a * a * nf / (sb * sb)))))
        .ln()
            - (d * d / (8.0 * sj * sj) + a * a / (2.0 * sb * sb)) * nf;
        lower = lower.min(v);
    }
    (scale_lo.ln() + lower, logsumexp(&upper_terms))
}
