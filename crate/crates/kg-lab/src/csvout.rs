//! CSV emission with a fixed column order per schema and deterministic
//! number formatting: '.' decimal separator, scientific notation below
//! 1e−4 in magnitude, shortest round-trip representation otherwise.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kg_core::{BoundSet, LogValue};

use crate::montecarlo::EstimateSeries;

pub const MEASURES_HEADER: &[&str] = &[
    "t", "pe_hat", "pe_stderr", "pe_upper", "pe_lower", "sr_hat", "sr_stderr", "sr_upper",
    "sr_lower", "cr_hat", "cr_stderr", "cr_upper", "confidence", "vacuous",
];

pub const ALPHA_HEADER: &[&str] = &[
    "t", "arm", "alpha_hat", "alpha_stderr", "alpha_lower", "alpha_upper", "valid",
];

pub const BOUNDS_MEASURES_HEADER: &[&str] = &[
    "t", "pe_upper", "pe_lower", "sr_upper", "sr_lower", "pe_upper_log", "pe_lower_log",
    "sr_upper_log", "sr_lower_log", "cr_upper", "cr_rate_limit", "confidence", "valid", "vacuous",
];

pub const BOUNDS_ALPHA_HEADER: &[&str] = &[
    "t", "arm", "rho_lower", "rho_upper", "alpha_lower", "alpha_upper", "valid",
];

pub const FIGURE_HEADER: &[&str] = &["series", "t", "value", "valid", "vacuous"];

pub const ASYMPTOTICS_HEADER: &[&str] = &[
    "arm", "ratio_to_best", "alpha_limit", "cr_rate", "pe_upper_rate", "pe_lower_rate",
];

/// Deterministic cell formatting for floats.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_value).unwrap_or_default()
}

fn opt_linear(v: &Option<LogValue>) -> String {
    opt(v.map(LogValue::linear))
}

fn opt_log(v: &Option<LogValue>) -> String {
    match v {
        Some(lv) if !lv.is_zero() => format_value(lv.log()),
        _ => String::new(),
    }
}

/// Writes a header row plus data rows, '\n' line endings.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

/// One row per checkpoint: estimates beside the bound values. With
/// `rule_of_three`, an extra trailing column carries the 3/reps band for
/// checkpoints where no error was observed.
pub fn measures_rows(
    series: &EstimateSeries,
    bounds: &[BoundSet],
    rule_of_three: bool,
) -> Vec<Vec<String>> {
    let mut rows = Vec::with_capacity(series.checkpoint_rounds.len());
    for (c, &t) in series.checkpoint_rounds.iter().enumerate() {
        let b = &bounds[c];
        let mut row = vec![
            t.to_string(),
            format_value(series.pe_hat[c]),
            format_value(series.pe_stderr[c]),
            opt_linear(&b.pe_upper),
            opt_linear(&b.pe_lower),
            format_value(series.sr_hat[c]),
            format_value(series.sr_stderr[c]),
            opt_linear(&b.sr_upper),
            opt_linear(&b.sr_lower),
            format_value(series.cr_hat[c]),
            format_value(series.cr_stderr[c]),
            opt(b.cr_upper),
            format_value(b.confidence),
            b.vacuous.to_string(),
        ];
        if rule_of_three {
            row.push(if series.pe_hat[c] == 0.0 {
                format_value(3.0 / series.replications as f64)
            } else {
                String::new()
            });
        }
        rows.push(row);
    }
    rows
}

/// One row per (checkpoint, arm); arms are 1-based in all emitted files.
pub fn alpha_rows(series: &EstimateSeries, bounds: &[BoundSet]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (c, &t) in series.checkpoint_rounds.iter().enumerate() {
        let b = &bounds[c];
        for arm in 0..series.alpha_hat[c].len() {
            rows.push(vec![
                t.to_string(),
                (arm + 1).to_string(),
                format_value(series.alpha_hat[c][arm]),
                format_value(series.alpha_stderr[c][arm]),
                opt(b.alpha.as_ref().map(|a| a.lower[arm])),
                opt(b.alpha.as_ref().map(|a| a.upper[arm])),
                b.rho.valid.to_string(),
            ]);
        }
    }
    rows
}

/// Bound-only rows, one per grid round, with log-domain columns so the
/// deep-tail values survive where the linear ones underflow.
pub fn bounds_measures_rows(bounds: &[BoundSet], cr_rate_limit: f64) -> Vec<Vec<String>> {
    bounds
        .iter()
        .map(|b| {
            vec![
                b.t.to_string(),
                opt_linear(&b.pe_upper),
                opt_linear(&b.pe_lower),
                opt_linear(&b.sr_upper),
                opt_linear(&b.sr_lower),
                opt_log(&b.pe_upper),
                opt_log(&b.pe_lower),
                opt_log(&b.sr_upper),
                opt_log(&b.sr_lower),
                opt(b.cr_upper),
                format_value(cr_rate_limit),
                format_value(b.confidence),
                b.rho.valid.to_string(),
                b.vacuous.to_string(),
            ]
        })
        .collect()
}

/// Bound-only per-arm rows: pull-ratio and sampling-rate envelopes.
pub fn bounds_alpha_rows(bounds: &[BoundSet], best: usize) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for b in bounds {
        for arm in 0..b.rho.lower.len() {
            let (rho_lo, rho_up) = if arm == best {
                (String::new(), String::new())
            } else {
                (
                    format_value(b.rho.lower[arm]),
                    format_value(b.rho.upper[arm]),
                )
            };
            rows.push(vec![
                b.t.to_string(),
                (arm + 1).to_string(),
                rho_lo,
                rho_up,
                opt(b.alpha.as_ref().map(|a| a.lower[arm])),
                opt(b.alpha.as_ref().map(|a| a.upper[arm])),
                b.rho.valid.to_string(),
            ]);
        }
    }
    rows
}
