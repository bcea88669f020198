//! Resolution of form references given on the command line.
//!
//! A reference is `delta:K` (the level-1 weight-K eigenform, generated), a path to a
//! fixture file, a label with a file `<label>.json` in the fixtures directory, or a
//! label present in the fetch cache with the configured coefficient count.

use crate::config::Settings;
use crate::manifest::RunManifest;
use crate::{engine, CliError};
use rscong::forms::{delta_family_qexp, NewformData};
use rscong::ingest::{load_fixture, FormRecord, Fetcher, DEFAULT_BASE_URL};
use std::path::Path;

pub fn resolve(reference: &str, settings: &Settings, manifest: &mut RunManifest) -> Result<NewformData, CliError> {
    if let Some(k) = reference.strip_prefix("delta:") {
        let k: u32 = k.parse().map_err(|_| CliError::Usage(format!("bad weight in '{reference}'")))?;
        let form = delta_family_qexp(k, settings.n_max).map_err(engine)?;
        manifest.fixture(&form.label, &FormRecord::from_newform(&form).checksum());
        return Ok(form);
    }
    let direct = Path::new(reference);
    let in_fixtures = settings.fixtures.join(format!("{reference}.json"));
    let record = if direct.is_file() {
        load_fixture(direct).map_err(engine)?
    } else if in_fixtures.is_file() {
        load_fixture(&in_fixtures).map_err(engine)?
    } else {
        let fetcher = Fetcher::new(DEFAULT_BASE_URL, settings.cache_dir.clone());
        match fetcher.read_cache(reference, settings.n_max) {
            Some(entry) => entry.record,
            None => {
                return Err(CliError::Usage(format!(
                    "form '{reference}' not found: no such file, no {} and no cache entry with n_max = {}",
                    in_fixtures.display(),
                    settings.n_max
                )))
            }
        }
    };
    manifest.fixture(&record.label, &record.checksum());
    record.to_newform().map_err(engine)
}
