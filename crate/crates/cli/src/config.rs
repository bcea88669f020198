//! Global options: command-line flags, an optional JSON config file, then defaults.

use crate::CliError;
use clap::Args;
use rscong::exactnum::Precision;
use rscong::ingest::resolve_cache_dir;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Cache directory for fetched forms (else RANKIN_CACHE_DIR, else the user cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Directory of fixture files named `<label>.json`.
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// Write the run manifest here.
    #[arg(long, global = true)]
    pub manifest_out: Option<PathBuf>,
    /// Coefficient count for internally generated level-1 forms.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// JSON file whose keys mirror the global flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Contents of the config file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub precision: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
    pub manifest_out: Option<PathBuf>,
    pub n_max: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

pub const DEFAULT_PRECISION: u32 = 120;
pub const DEFAULT_N_MAX: usize = 6000;

/// Effective settings after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub precision: Precision,
    pub cache_dir: PathBuf,
    pub fixtures: PathBuf,
    pub json_out: Option<PathBuf>,
    pub manifest_out: Option<PathBuf>,
    pub n_max: usize,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let digits = args.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION);
        if digits < 10 {
            return Err(CliError::Usage(format!("precision {digits} is below the minimum of 10 digits")));
        }
        let cache = args.cache_dir.clone().or(file.cache_dir);
        Ok(Settings {
            precision: Precision::new(digits),
            cache_dir: resolve_cache_dir(cache.as_deref()),
            fixtures: args
                .fixtures
                .clone()
                .or(file.fixtures)
                .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")),
            json_out: args.json_out.clone().or(file.json_out),
            manifest_out: args.manifest_out.clone().or(file.manifest_out),
            n_max: args.n_max.or(file.n_max).unwrap_or(DEFAULT_N_MAX),
        })
    }
}
