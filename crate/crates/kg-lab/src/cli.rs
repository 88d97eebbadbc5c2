//! The `kg-lab` command line: instance catalog inspection, Monte Carlo
//! simulation, bound-curve evaluation over round grids, figure assembly,
//! and the asymptotic profile.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kg_core::{
    asymptotic_profile, catalog, cr_rate_limit, BanditInstance, BoundSet, LogValue, CATALOG_IDS,
};

use crate::config::{
    instance_from_arg, instance_from_spec, load_config_file, ConfigFile, ExperimentConfig,
    FigureKind,
};
use crate::csvout;
use crate::grid::{geometric_grid, parse_t_grid};
use crate::montecarlo::{self, EstimateSeries};
use crate::svg::{emit_svg, FigureSpec, Series};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> CliError {
        CliError::Validation(msg)
    }
}

#[derive(Parser)]
#[command(
    name = "kg-lab",
    version,
    about = "Knowledge-gradient best-arm identification: simulation and finite-time bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the built-in instance catalog.
    Instance {
        #[command(subcommand)]
        action: InstanceAction,
    },
    /// Run replications and emit measure/sampling-rate CSVs with bounds.
    Simulate(SimulateArgs),
    /// Evaluate the analytical bounds over a round grid (no simulation).
    Bounds(BoundsArgs),
    /// Produce a CSV + SVG figure for one measure or the sampling rates.
    Figure(FigureArgs),
    /// Print the asymptotic allocation and rate profile.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Subcommand)]
enum InstanceAction {
    /// List the catalog.
    List,
    /// Show one instance (catalog id or instance JSON path).
    Show { instance: String },
}

#[derive(Args)]
struct SimulateArgs {
    /// Catalog id (1..=5) or path to an instance JSON file.
    #[arg(long)]
    instance: Option<String>,
    /// Total pulls per replication, initial stage included.
    #[arg(long)]
    rounds: Option<u64>,
    /// Initial pulls per arm.
    #[arg(long)]
    n0: Option<u64>,
    /// Number of replications.
    #[arg(long)]
    reps: Option<u64>,
    /// Experiment seed; replication r uses substream (seed, r).
    #[arg(long)]
    seed: Option<u64>,
    /// Checkpoint grid: geometric:<start>:<stop>:<points> or list:a,b,c.
    #[arg(long)]
    checkpoints: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add a trailing column with the 3/reps band where no error was seen.
    #[arg(long)]
    rule_of_three: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Catalog id (1..=5) or path to an instance JSON file.
    #[arg(long)]
    instance: String,
    /// Round grid: geometric:<start>:<stop>:<points> or list:a,b,c.
    #[arg(long)]
    t_grid: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct FigureArgs {
    #[command(flatten)]
    sim: SimulateArgs,
    /// Figure kind.
    #[arg(long, value_enum)]
    kind: Option<FigureKind>,
    /// Arms for the sampling-rates figure, 1-based, e.g. 1,5,10.
    #[arg(long)]
    arms: Option<String>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Catalog id (1..=5) or path to an instance JSON file.
    #[arg(long)]
    instance: String,
    /// Optional CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses arguments, dispatches, and maps failures to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e @ CliError::Validation(_)) => {
            eprintln!("error: {e}");
            1
        }
        Err(e @ CliError::Io { .. }) => {
            eprintln!("I/O error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Instance { action } => match action {
            InstanceAction::List => instance_list(),
            InstanceAction::Show { instance } => instance_show(&instance),
        },
        Command::Simulate(args) => simulate(args),
        Command::Bounds(args) => bounds(args),
        Command::Figure(args) => figure(args),
        Command::Asymptotics(args) => asymptotics(args),
    }
}

fn instance_list() -> Result<(), CliError> {
    println!("id  k   best  means / stds");
    for id in CATALOG_IDS {
        let inst = catalog(id).map_err(|e| CliError::Validation(e.to_string()))?;
        println!(
            "{:<3} {:<3} {:<5} means {}  stds {}",
            id,
            inst.k(),
            inst.best() + 1,
            compact(inst.means()),
            compact(inst.stds()),
        );
    }
    Ok(())
}

fn instance_show(arg: &str) -> Result<(), CliError> {
    let (inst, label) = instance_from_arg(arg).map_err(CliError::Validation)?;
    let c = inst.constants();
    println!("{label}");
    println!("k = {}", inst.k());
    println!("means = {}", compact(inst.means()));
    println!("stds  = {}", compact(inst.stds()));
    println!("best arm = {}", inst.best() + 1);
    println!(
        "delta_min = {}, delta_max = {}, sigma_min = {}, sigma_max = {}, second best mean = {}",
        c.delta_min, c.delta_max, c.sigma_min, c.sigma_max, c.second_best_mean
    );
    Ok(())
}

fn compact(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Merges flags over an optional config file into a full configuration.
fn resolve_config(args: &SimulateArgs, kind: Option<FigureKind>) -> Result<ExperimentConfig, CliError> {
    let file = match &args.config {
        Some(path) => load_config_file(path).map_err(CliError::Validation)?,
        None => ConfigFile::default(),
    };
    let (instance, label) = match (&args.instance, &file.instance) {
        (Some(arg), _) => instance_from_arg(arg).map_err(CliError::Validation)?,
        (None, Some(spec)) => instance_from_spec(spec).map_err(CliError::Validation)?,
        (None, None) => {
            return Err(CliError::Validation(
                "no instance given (use --instance or a config file)".into(),
            ))
        }
    };
    let rounds = args
        .rounds
        .or(file.rounds)
        .ok_or_else(|| CliError::Validation("no --rounds given".into()))?;
    let n0 = args.n0.or(file.n0).unwrap_or(5);
    let replications = args.reps.or(file.replications).unwrap_or(100);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let outputs = args
        .out
        .clone()
        .or(file.outputs)
        .unwrap_or_else(|| PathBuf::from("out"));
    let kind = kind.or(file.kind).unwrap_or(FigureKind::Pe);

    if n0 == 0 {
        return Err(CliError::Validation("n0 must be at least 1".into()));
    }
    let start = instance.k() as u64 * n0;
    if rounds < start {
        return Err(CliError::Validation(format!(
            "rounds = {rounds} is below the initial stage budget k*n0 = {start}"
        )));
    }
    if replications < 1 {
        return Err(CliError::Validation("reps must be at least 1".into()));
    }
    let checkpoints = match args.checkpoints.as_deref().or(file.checkpoints.as_deref()) {
        Some(spec) => {
            let grid = parse_t_grid(spec).map_err(CliError::Validation)?;
            if grid.first().is_some_and(|&c| c < start) || grid.last().is_some_and(|&c| c > rounds)
            {
                return Err(CliError::Validation(format!(
                    "checkpoints must lie within [{start}, {rounds}]"
                )));
            }
            grid
        }
        None => geometric_grid(start, rounds, 30),
    };
    Ok(ExperimentConfig {
        instance,
        label,
        rounds,
        n0,
        replications,
        seed,
        checkpoints,
        outputs,
        kind,
    })
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

fn run_simulation(cfg: &ExperimentConfig) -> Result<(EstimateSeries, Vec<BoundSet>), CliError> {
    let series = montecarlo::run_replications(
        &cfg.instance,
        cfg.rounds,
        cfg.n0,
        cfg.replications,
        cfg.seed,
        &cfg.checkpoints,
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;
    let bounds = cfg
        .checkpoints
        .iter()
        .map(|&t| BoundSet::evaluate(&cfg.instance, t))
        .collect();
    Ok((series, bounds))
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = resolve_config(&args, None)?;
    ensure_out_dir(&cfg.outputs)?;
    let (series, bounds) = run_simulation(&cfg)?;

    let measures_path = cfg.outputs.join("measures.csv");
    let mut header: Vec<&str> = csvout::MEASURES_HEADER.to_vec();
    if args.rule_of_three {
        header.push("pe_rule_of_three");
    }
    csvout::write_csv(
        &measures_path,
        &header,
        &csvout::measures_rows(&series, &bounds, args.rule_of_three),
    )
    .map_err(CliError::io(&measures_path))?;

    let alpha_path = cfg.outputs.join("alpha.csv");
    csvout::write_csv(
        &alpha_path,
        csvout::ALPHA_HEADER,
        &csvout::alpha_rows(&series, &bounds),
    )
    .map_err(CliError::io(&alpha_path))?;

    println!(
        "simulated {} x {} replications of {} (seed {}); wrote {} and {}",
        cfg.label,
        cfg.replications,
        cfg.rounds,
        cfg.seed,
        measures_path.display(),
        alpha_path.display()
    );
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<(), CliError> {
    let (inst, label) = instance_from_arg(&args.instance).map_err(CliError::Validation)?;
    let grid = parse_t_grid(&args.t_grid).map_err(CliError::Validation)?;
    ensure_out_dir(&args.out)?;
    let sets: Vec<BoundSet> = grid.iter().map(|&t| BoundSet::evaluate(&inst, t)).collect();

    let measures_path = args.out.join("bounds_measures.csv");
    csvout::write_csv(
        &measures_path,
        csvout::BOUNDS_MEASURES_HEADER,
        &csvout::bounds_measures_rows(&sets, cr_rate_limit(&inst)),
    )
    .map_err(CliError::io(&measures_path))?;

    let alpha_path = args.out.join("bounds_alpha.csv");
    csvout::write_csv(
        &alpha_path,
        csvout::BOUNDS_ALPHA_HEADER,
        &csvout::bounds_alpha_rows(&sets, inst.best()),
    )
    .map_err(CliError::io(&alpha_path))?;

    println!(
        "evaluated bounds for {label} at {} grid points; wrote {} and {}",
        grid.len(),
        measures_path.display(),
        alpha_path.display()
    );
    Ok(())
}

fn asymptotics(args: AsymptoticsArgs) -> Result<(), CliError> {
    let (inst, label) = instance_from_arg(&args.instance).map_err(CliError::Validation)?;
    let profile = asymptotic_profile(&inst);
    println!("{label}: asymptotic profile");
    println!("arm  ratio_to_best  alpha_limit");
    for i in 0..inst.k() {
        println!(
            "{:<4} {:<14} {}",
            i + 1,
            csvout::format_value(profile.ratio_to_best[i]),
            csvout::format_value(profile.alpha_limits[i])
        );
    }
    println!("cr rate limit      = {}", csvout::format_value(profile.cr_rate));
    println!(
        "pe bound rates     = {} (upper), {} (lower)",
        csvout::format_value(profile.pe_upper_rate),
        csvout::format_value(profile.pe_lower_rate)
    );
    if let Some(path) = args.out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            ensure_out_dir(dir)?;
        }
        let rows: Vec<Vec<String>> = (0..inst.k())
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    csvout::format_value(profile.ratio_to_best[i]),
                    csvout::format_value(profile.alpha_limits[i]),
                    csvout::format_value(profile.cr_rate),
                    csvout::format_value(profile.pe_upper_rate),
                    csvout::format_value(profile.pe_lower_rate),
                ]
            })
            .collect();
        csvout::write_csv(&path, csvout::ASYMPTOTICS_HEADER, &rows)
            .map_err(CliError::io(&path))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn figure(args: FigureArgs) -> Result<(), CliError> {
    let cfg = resolve_config(&args.sim, args.kind)?;
    ensure_out_dir(&cfg.outputs)?;
    let bounds: Vec<BoundSet> = cfg
        .checkpoints
        .iter()
        .map(|&t| BoundSet::evaluate(&cfg.instance, t))
        .collect();
    let series = if cfg.kind == FigureKind::BoundsOnly {
        None
    } else {
        Some(run_simulation(&cfg)?.0)
    };

    let curves = match cfg.kind {
        FigureKind::SamplingRates => {
            sampling_rate_curves(&cfg.instance, series.as_ref(), &bounds, args.arms.as_deref())?
        }
        FigureKind::Pe => measure_curves(series.as_ref(), &bounds, Measure::Pe),
        FigureKind::Sr => measure_curves(series.as_ref(), &bounds, Measure::Sr),
        FigureKind::Cr => cr_curves(&cfg.instance, series.as_ref(), &bounds),
        FigureKind::BoundsOnly => measure_curves(None, &bounds, Measure::Pe),
    };

    let (y_label, title_kind) = match cfg.kind {
        FigureKind::SamplingRates => ("sampling rate", "sampling rates"),
        FigureKind::Pe | FigureKind::BoundsOnly => ("-log(pe)/t", "probability of error"),
        FigureKind::Sr => ("-log(sr)/t", "simple regret"),
        FigureKind::Cr => ("R_t/t", "cumulative regret"),
    };
    let spec = FigureSpec {
        title: format!("{} — {title_kind}", cfg.label),
        x_label: "rounds t".into(),
        y_label: y_label.into(),
        log_x: true,
        series: curves.clone(),
    };

    let base = format!("figure_{}", cfg.kind.as_str());
    let svg_path = cfg.outputs.join(format!("{base}.svg"));
    emit_svg(&svg_path, &spec).map_err(CliError::io(&svg_path))?;

    let csv_path = cfg.outputs.join(format!("{base}.csv"));
    let mut rows = Vec::new();
    for s in &curves {
        for (ci, &(t, v)) in s.points.iter().enumerate() {
            let b = &bounds[ci];
            let (valid, vacuous) = if s.dashed {
                (b.rho.valid.to_string(), b.vacuous.to_string())
            } else {
                (String::new(), String::new())
            };
            rows.push(vec![
                s.name.clone(),
                (t as u64).to_string(),
                v.map(csvout::format_value).unwrap_or_default(),
                valid,
                vacuous,
            ]);
        }
    }
    csvout::write_csv(&csv_path, csvout::FIGURE_HEADER, &rows).map_err(CliError::io(&csv_path))?;

    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}

enum Measure {
    Pe,
    Sr,
}

/// Transformed measure curves: −log(estimate)/t solid, bound curves dashed.
/// On this scale the upper probability bound is the lower curve.
fn measure_curves(
    series: Option<&EstimateSeries>,
    bounds: &[BoundSet],
    measure: Measure,
) -> Vec<Series> {
    let rounds: Vec<u64> = bounds.iter().map(|b| b.t).collect();
    let rate = |v: f64, t: u64| if v > 0.0 { Some(-v.ln() / t as f64) } else { None };
    let log_rate = |lv: &Option<LogValue>, t: u64| match lv {
        Some(lv) if !lv.is_zero() => Some(-lv.log() / t as f64),
        _ => None,
    };
    let mut curves = Vec::new();
    if let Some(series) = series {
        let (hat, name) = match measure {
            Measure::Pe => (&series.pe_hat, "-log(pe)/t empirical"),
            Measure::Sr => (&series.sr_hat, "-log(sr)/t empirical"),
        };
        curves.push(Series {
            name: name.into(),
            points: rounds
                .iter()
                .zip(hat)
                .map(|(&t, &v)| (t as f64, rate(v, t)))
                .collect(),
            dashed: false,
        });
    }
    let (upper_name, lower_name) = match measure {
        Measure::Pe => ("upper pe bound (transformed)", "lower pe bound (transformed)"),
        Measure::Sr => ("upper sr bound (transformed)", "lower sr bound (transformed)"),
    };
    let pick = |b: &BoundSet| match measure {
        Measure::Pe => (b.pe_upper, b.pe_lower),
        Measure::Sr => (b.sr_upper, b.sr_lower),
    };
    curves.push(Series {
        name: upper_name.into(),
        points: bounds
            .iter()
            .map(|b| (b.t as f64, log_rate(&pick(b).0, b.t)))
            .collect(),
        dashed: true,
    });
    curves.push(Series {
        name: lower_name.into(),
        points: bounds
            .iter()
            .map(|b| (b.t as f64, log_rate(&pick(b).1, b.t)))
            .collect(),
        dashed: true,
    });
    curves
}

fn cr_curves(
    inst: &BanditInstance,
    series: Option<&EstimateSeries>,
    bounds: &[BoundSet],
) -> Vec<Series> {
    let mut curves = Vec::new();
    if let Some(series) = series {
        curves.push(Series {
            name: "R_t/t empirical".into(),
            points: series
                .checkpoint_rounds
                .iter()
                .zip(&series.cr_hat)
                .map(|(&t, &v)| (t as f64, Some(v / t as f64)))
                .collect(),
            dashed: false,
        });
    }
    curves.push(Series {
        name: "R_t/t bound".into(),
        points: bounds
            .iter()
            .map(|b| (b.t as f64, b.cr_upper.map(|v| v / b.t as f64)))
            .collect(),
        dashed: true,
    });
    let limit = cr_rate_limit(inst);
    curves.push(Series {
        name: "limit rate".into(),
        points: bounds
            .iter()
            .map(|b| (b.t as f64, Some(limit)))
            .collect(),
        dashed: true,
    });
    curves
}

/// Sampling-rate curves for three arms (defaults mirror the usual figure:
/// lowest non-best, median non-best, best), empirical solid, bounds dashed.
fn sampling_rate_curves(
    inst: &BanditInstance,
    series: Option<&EstimateSeries>,
    bounds: &[BoundSet],
    arms: Option<&str>,
) -> Result<Vec<Series>, CliError> {
    let selected = match arms {
        Some(list) => {
            let mut v = Vec::new();
            for part in list.split(',') {
                let arm: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Validation(format!("bad arm '{part}'")))?;
                if arm < 1 || arm > inst.k() {
                    return Err(CliError::Validation(format!(
                        "arm {arm} out of range 1..={}",
                        inst.k()
                    )));
                }
                v.push(arm - 1);
            }
            v
        }
        None => {
            let non_best: Vec<usize> = (0..inst.k()).filter(|&i| i != inst.best()).collect();
            vec![
                non_best[0],
                non_best[non_best.len() / 2],
                inst.best(),
            ]
        }
    };
    let mut curves = Vec::new();
    for &arm in &selected {
        if let Some(series) = series {
            curves.push(Series {
                name: format!("arm {} empirical", arm + 1),
                points: series
                    .checkpoint_rounds
                    .iter()
                    .zip(&series.alpha_hat)
                    .map(|(&t, alpha)| (t as f64, Some(alpha[arm])))
                    .collect(),
                dashed: false,
            });
        }
        curves.push(Series {
            name: format!("arm {} lower", arm + 1),
            points: bounds
                .iter()
                .map(|b| (b.t as f64, b.alpha.as_ref().map(|a| a.lower[arm])))
                .collect(),
            dashed: true,
        });
        curves.push(Series {
            name: format!("arm {} upper", arm + 1),
            points: bounds
                .iter()
                .map(|b| (b.t as f64, b.alpha.as_ref().map(|a| a.upper[arm])))
                .collect(),
            dashed: true,
        });
    }
    Ok(curves)
}
