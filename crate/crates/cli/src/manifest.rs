//! Reproducibility record of one run.

use crate::config::Settings;
use crate::CliError;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    pub precision: u32,
    /// SHA-256 of the canonical record of every form used, by label.
    pub fixture_checksums: BTreeMap<String, String>,
    pub code_version: String,
    pub wall_time_seconds: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn start(command: &str, settings: &Settings) -> Self {
        RunManifest {
            schema_version: crate::SCHEMA_VERSION,
            command: command.into(),
            arguments: BTreeMap::new(),
            precision: settings.precision.digits,
            fixture_checksums: BTreeMap::new(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_seconds: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.arguments.insert(key.into(), value.to_string());
        self
    }

    pub fn fixture(&mut self, label: &str, sha256: &str) {
        self.fixture_checksums.insert(label.into(), sha256.into());
    }

    pub fn finish(&mut self, path: &Path) -> Result<(), CliError> {
        self.wall_time_seconds = self.started.map_or(0.0, |t| t.elapsed().as_secs_f64());
        let text = serde_json::to_string_pretty(self)? + "\n";
        rscong::ingest::atomic_write(path, text.as_bytes()).map_err(crate::engine)
    }
}
