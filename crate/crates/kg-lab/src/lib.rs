//! Experiment tooling around `kg-core`: a deterministic replication engine
//! with per-checkpoint estimators, the figure transforms, CSV and SVG
//! emission, and the `kg-lab` command-line front end.

pub mod cli;
pub mod config;
pub mod csvout;
pub mod grid;
pub mod montecarlo;
pub mod svg;

pub use config::{ExperimentConfig, FigureKind};
pub use grid::{geometric_grid, parse_t_grid};
pub use montecarlo::{
    concentration_check, estimate_from_traces, estimate_transforms, gaussian_mean_tail_bound,
    run_replications, run_replications_with_threads, run_replications_with_traces,
    ConcentrationCheck, EstimateSeries, TransformedSeries,
};
