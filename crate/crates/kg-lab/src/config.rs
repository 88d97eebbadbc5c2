//! Experiment configuration: JSON config files, the instance JSON schema,
//! and flag/file merging. Flags always win over file values.

use std::path::{Path, PathBuf};

use kg_core::{catalog, BanditInstance};
use serde::Deserialize;

/// Which figure to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    SamplingRates,
    Pe,
    Sr,
    Cr,
    BoundsOnly,
}

impl FigureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureKind::SamplingRates => "sampling-rates",
            FigureKind::Pe => "pe",
            FigureKind::Sr => "sr",
            FigureKind::Cr => "cr",
            FigureKind::BoundsOnly => "bounds-only",
        }
    }
}

/// An instance reference inside a config file: a catalog id, an inline
/// `{means, stds}` pair, or a path to an instance JSON file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Catalog(u32),
    Inline { means: Vec<f64>, stds: Vec<f64> },
    Path(String),
}

/// On-disk experiment configuration; every field optional, flags override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: Option<InstanceSpec>,
    pub rounds: Option<u64>,
    pub n0: Option<u64>,
    pub replications: Option<u64>,
    pub seed: Option<u64>,
    pub checkpoints: Option<String>,
    pub outputs: Option<PathBuf>,
    pub kind: Option<FigureKind>,
}

/// The instance JSON schema consumed by the CLI: `{"means":[..],"stds":[..]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    means: Vec<f64>,
    stds: Vec<f64>,
}

/// A fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instance: BanditInstance,
    pub label: String,
    pub rounds: u64,
    pub n0: u64,
    pub replications: u64,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub outputs: PathBuf,
    pub kind: FigureKind,
}

pub fn load_config_file(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Loads an instance from a `--instance` argument: a catalog id `1..=5`
/// or a path to an instance JSON file.
pub fn instance_from_arg(arg: &str) -> Result<(BanditInstance, String), String> {
    if let Ok(id) = arg.parse::<u32>() {
        let inst = catalog(id).map_err(|e| e.to_string())?;
        return Ok((inst, format!("instance {id}")));
    }
    instance_from_path(Path::new(arg))
}

pub fn instance_from_path(path: &Path) -> Result<(BanditInstance, String), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read instance {}: {e}", path.display()))?;
    let parsed: InstanceJson = serde_json::from_str(&text)
        .map_err(|e| format!("bad instance JSON {}: {e}", path.display()))?;
    let inst = BanditInstance::new(parsed.means, parsed.stds).map_err(|e| e.to_string())?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((inst, label))
}

pub fn instance_from_spec(spec: &InstanceSpec) -> Result<(BanditInstance, String), String> {
    match spec {
        InstanceSpec::Catalog(id) => {
            let inst = catalog(*id).map_err(|e| e.to_string())?;
            Ok((inst, format!("instance {id}")))
        }
        InstanceSpec::Inline { means, stds } => {
            let inst = BanditInstance::new(means.clone(), stds.clone())
                .map_err(|e| e.to_string())?;
            Ok((inst, "inline instance".into()))
        }
        InstanceSpec::Path(p) => instance_from_path(Path::new(p)),
    }
}
