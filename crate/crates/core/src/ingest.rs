//! q-expansion data acquisition: JSON fixtures, an HTTP client for a
//! newform API, and a checksummed on-disk cache.
//!
//! Fixture schema:
//!
//! ```json
//! {"label": "...", "level": 3, "weight": 13,
//!  "char": {"modulus": 3, "values": [[1, [1,1,0,1]], [2, [-1,1,0,1]]]},
//!  "field_disc": -104,
//!  "an": [[a_num, a_den, b_num, b_den], ...]}
//! ```
//!
//! Entry `[a_num, a_den, b_num, b_den]` is `a_num/a_den + (b_num/b_den) sqrt(d0)`
//! where `d0` is the squarefree part of `field_disc` (0 means `Q`). Integers
//! may be JSON numbers of any size or decimal strings.

use crate::exactnum::{AlgNum, QuadField, Rat};
use crate::forms::{DirichletChar, NewformData};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};
use thiserror::Error;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "RANKIN_CACHE_DIR";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("unparseable payload at line {line}, column {column} (byte offset {offset}): {message}")]
    Format { line: usize, column: usize, offset: usize, message: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("network error after {attempts} attempts: {message}")]
    Network { attempts: u32, message: String },
    #[error("unsupported coefficient field: {0}")]
    UnsupportedField(String),
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> IngestError {
    IngestError::Schema { pointer: pointer.into(), message: message.into() }
}

/// Coefficient `a_num/a_den + (b_num/b_den) sqrt(d0)` as stored on disk.
pub type CoeffEntry = [BigInt; 4];

/// Character specification: modulus and values on the units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSpec {
    pub modulus: u64,
    pub values: Vec<(u64, CoeffEntry)>,
}

/// One form as stored in a fixture or cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormRecord {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub chi: CharSpec,
    pub field_disc: i64,
    pub an: Vec<CoeffEntry>,
}

impl FormRecord {
    pub fn n_max(&self) -> usize {
        self.an.len()
    }

    pub fn field(&self) -> Result<QuadField, IngestError> {
        QuadField::from_disc(self.field_disc).map_err(|e| schema("/field_disc", e.to_string()))
    }

    /// Canonical JSON: sorted keys, reduced fractions, one coefficient per line.
    pub fn to_canonical_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str("  \"an\": [");
        for (i, c) in self.an.iter().enumerate() {
            s.push_str(if i == 0 { "\n    " } else { ",\n    " });
            s.push_str(&entry_json(&canonical_entry(c)));
        }
        s.push_str(if self.an.is_empty() { "],\n" } else { "\n  ],\n" });
        s.push_str(&format!("  \"char\": {{\"modulus\": {}, \"values\": [", self.chi.modulus));
        for (i, (r, c)) in self.chi.values.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&format!("[{r}, {}]", entry_json(&canonical_entry(c))));
        }
        s.push_str("]},\n");
        s.push_str(&format!("  \"field_disc\": {},\n", self.field_disc));
        s.push_str(&format!("  \"label\": {},\n", Value::String(self.label.clone())));
        s.push_str(&format!("  \"level\": {},\n", self.level));
        s.push_str(&format!("  \"weight\": {}\n", self.weight));
        s.push_str("}\n");
        s
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json().as_bytes()))
    }

    /// Converts to a [`NewformData`] after integrity checks (`a(1) = 1`,
    /// multiplicativity on 20 random coprime pairs).
    pub fn to_newform(&self) -> Result<NewformData, IngestError> {
        let field = self.field()?;
        let mut values = BTreeMap::new();
        for (i, (r, c)) in self.chi.values.iter().enumerate() {
            values.insert(*r, entry_to_alg(c, field, &format!("/char/values/{i}/1"))?);
        }
        let chi = DirichletChar::from_table(self.chi.modulus, values).map_err(|e| schema("/char", e.to_string()))?;
        let an = self
            .an
            .iter()
            .enumerate()
            .map(|(i, c)| entry_to_alg(c, field, &format!("/an/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let form = NewformData::new(self.label.clone(), self.level, self.weight, chi, an, true)
            .map_err(|e| IngestError::UnsupportedField(e.to_string()))?;
        if form.n_max() >= 1 && !form.a(1).is_one() {
            return Err(IngestError::Integrity(format!("a(1) = {} but forms must be normalized with a(1) = 1", form.a(1))));
        }
        spot_check_multiplicativity(&form)?;
        Ok(form)
    }

    /// Record holding the coefficients of `form` (coefficients must lie in `Q` or one quadratic field).
    pub fn from_newform(form: &NewformData) -> Self {
        let field_disc = if form.field.is_rational() { 0 } else { form.field.disc() };
        FormRecord {
            label: form.label.clone(),
            level: form.level,
            weight: form.weight,
            chi: CharSpec {
                modulus: form.chi.modulus,
                values: form.chi.values.iter().map(|(r, v)| (*r, alg_to_entry(v))).collect(),
            },
            field_disc,
            an: form.coeffs[1..].iter().map(alg_to_entry).collect(),
        }
    }
}

fn canonical_entry(c: &CoeffEntry) -> CoeffEntry {
    let a = Rat::new(c[0].clone(), c[1].clone());
    let b = Rat::new(c[2].clone(), c[3].clone());
    [a.numer().clone(), a.denom().clone(), b.numer().clone(), b.denom().clone()]
}

fn entry_json(c: &CoeffEntry) -> String {
    format!("[{}, {}, {}, {}]", c[0], c[1], c[2], c[3])
}

fn alg_to_entry(x: &AlgNum) -> CoeffEntry {
    [x.a.numer().clone(), x.a.denom().clone(), x.b.numer().clone(), x.b.denom().clone()]
}

fn entry_to_alg(c: &CoeffEntry, field: QuadField, pointer: &str) -> Result<AlgNum, IngestError> {
    if c[1].is_zero() || c[3].is_zero() {
        return Err(schema(pointer, "zero denominator"));
    }
    let a = Rat::new(c[0].clone(), c[1].clone());
    let b = Rat::new(c[2].clone(), c[3].clone());
    if field.is_rational() && !b.is_zero() {
        return Err(schema(pointer, "irrational part given but field_disc is 0"));
    }
    Ok(AlgNum::new(field, a, b))
}

fn spot_check_multiplicativity(form: &NewformData) -> Result<(), IngestError> {
    let n = form.n_max();
    if n < 6 {
        return Ok(());
    }
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&(n as u64).to_le_bytes());
    for (i, b) in form.label.bytes().enumerate().take(24) {
        seed[8 + i] = b;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let mut checked = 0;
    let mut tries = 0;
    while checked < 20 && tries < 2000 {
        tries += 1;
        let m1 = rng.gen_range(2..=n / 2);
        let m2 = rng.gen_range(2..=(n / m1).max(2));
        if m1 * m2 > n || m1.gcd(&m2) != 1 {
            continue;
        }
        checked += 1;
        if form.a(m1 * m2) != &(form.a(m1) * form.a(m2)) {
            return Err(IngestError::Integrity(format!("a({}) != a({m1}) a({m2})", m1 * m2)));
        }
    }
    Ok(())
}

fn parse_bigint(v: &Value, pointer: &str) -> Result<BigInt, IngestError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(pointer, "expected an integer")),
    };
    text.trim().parse::<BigInt>().map_err(|_| schema(pointer, format!("not an integer: {text}")))
}

fn parse_u64(v: &Value, pointer: &str) -> Result<u64, IngestError> {
    let n = parse_bigint(v, pointer)?;
    u64::try_from(n).map_err(|_| schema(pointer, "expected a non-negative 64-bit integer"))
}

fn parse_entry(v: &Value, pointer: &str) -> Result<CoeffEntry, IngestError> {
    let arr = v.as_array().ok_or_else(|| schema(pointer, "expected [a_num, a_den, b_num, b_den]"))?;
    if arr.len() != 4 {
        return Err(schema(pointer, format!("expected 4 integers, found {}", arr.len())));
    }
    let mut out: Vec<BigInt> = Vec::with_capacity(4);
    for (i, x) in arr.iter().enumerate() {
        out.push(parse_bigint(x, &format!("{pointer}/{i}"))?);
    }
    for i in [1, 3] {
        if out[i] <= BigInt::zero() {
            return Err(schema(format!("{pointer}/{i}"), "denominator must be positive"));
        }
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, base: &str) -> Result<&'a Value, IngestError> {
    obj.get(key).ok_or_else(|| schema(format!("{base}/{key}"), "missing field"))
}

/// Parses a record from a JSON value following the fixture schema.
pub fn record_from_value(v: &Value) -> Result<FormRecord, IngestError> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected a JSON object"))?;
    let label = field(obj, "label", "")?.as_str().ok_or_else(|| schema("/label", "expected a string"))?.to_string();
    let level = parse_u64(field(obj, "level", "")?, "/level")?;
    let weight = parse_u64(field(obj, "weight", "")?, "/weight")? as u32;
    let field_disc = i64::try_from(parse_bigint(field(obj, "field_disc", "")?, "/field_disc")?)
        .map_err(|_| schema("/field_disc", "out of range"))?;
    let ch = field(obj, "char", "")?.as_object().ok_or_else(|| schema("/char", "expected an object"))?;
    let modulus = parse_u64(field(ch, "modulus", "/char")?, "/char/modulus")?;
    let vals = field(ch, "values", "/char")?.as_array().ok_or_else(|| schema("/char/values", "expected an array"))?;
    let mut values = Vec::with_capacity(vals.len());
    for (i, pair) in vals.iter().enumerate() {
        let p = format!("/char/values/{i}");
        let arr = pair.as_array().filter(|a| a.len() == 2).ok_or_else(|| schema(&p, "expected [residue, entry]"))?;
        values.push((parse_u64(&arr[0], &format!("{p}/0"))?, parse_entry(&arr[1], &format!("{p}/1"))?));
    }
    let an_v = field(obj, "an", "")?.as_array().ok_or_else(|| schema("/an", "expected an array"))?;
    let an = an_v
        .iter()
        .enumerate()
        .map(|(i, e)| parse_entry(e, &format!("/an/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(Value::Number(deg)) = obj.get("field_degree") {
        if deg.to_string().parse::<u64>().map(|d| d > 2).unwrap_or(true) {
            return Err(IngestError::UnsupportedField(format!(
                "coefficient field of degree {deg}; only Q and quadratic fields are supported"
            )));
        }
    }
    Ok(FormRecord { label, level, weight, chi: CharSpec { modulus, values }, field_disc, an })
}

fn parse_json(text: &str) -> Result<Value, IngestError> {
    serde_json::from_str(text).map_err(|e| {
        let offset = byte_offset(text, e.line(), e.column());
        IngestError::Format { line: e.line(), column: e.column(), offset, message: e.to_string() }
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut off = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return off + column.saturating_sub(1).min(l.len());
        }
        off += l.len();
    }
    text.len()
}

/// Parses a record from JSON text.
pub fn parse_record(text: &str) -> Result<FormRecord, IngestError> {
    record_from_value(&parse_json(text)?)
}

/// Loads a fixture file.
pub fn load_fixture(path: impl AsRef<Path>) -> Result<FormRecord, IngestError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IngestError::Io { path: path.display().to_string(), source: e })?;
    parse_record(&text)
}

/// Loads a fixture file and converts it to a checked [`NewformData`].
pub fn load_newform(path: impl AsRef<Path>) -> Result<NewformData, IngestError> {
    load_fixture(path)?.to_newform()
}

/// Writes `contents` to `path` atomically (temporary file in the same directory, then rename).
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<(), IngestError> {
    let io = |e| IngestError::Io { path: path.display().to_string(), source: e };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("record"),
        std::process::id(),
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0)
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

/// Saves a record in canonical form.
pub fn save_fixture(record: &FormRecord, path: impl AsRef<Path>) -> Result<(), IngestError> {
    atomic_write(path.as_ref(), record.to_canonical_json().as_bytes())
}

/// Cache location: explicit argument, then `RANKIN_CACHE_DIR`, then a directory under the user cache.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(p);
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("rscong"),
        None => PathBuf::from(".rscong-cache"),
    }
}

/// Where a record fetched from the network came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Cache,
    Network,
}

/// Cached record together with its source URL and retrieval time.
#[derive(Clone, Debug)]
pub struct CacheEntry {
    pub record: FormRecord,
    pub source_url: String,
    pub retrieved_at_unix: u64,
    pub provenance: Provenance,
}

/// HTTP client with an on-disk cache keyed by `(label, n_max)`.
#[derive(Clone, Debug)]
pub struct Fetcher {
    pub base_url: String,
    pub cache_dir: PathBuf,
    pub attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org";

impl Fetcher {
    pub fn new(base_url: impl Into<String>, cache_dir: PathBuf) -> Self {
        Fetcher {
            base_url: base_url.into(),
            cache_dir,
            attempts: 3,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
        }
    }

    /// Cache file for a key; the name is a digest of `(label, n_max)`.
    pub fn cache_path(&self, label: &str, n_max: usize) -> PathBuf {
        let key = hex::encode(Sha256::digest(format!("{label}\u{0}{n_max}").as_bytes()));
        self.cache_dir.join(format!("{}.json", &key[..32]))
    }

    pub fn url_for(&self, label: &str, n_max: usize) -> String {
        format!("{}/api/mf_newforms/?label={}&_format=json&n_max={}", self.base_url.trim_end_matches('/'), label, n_max)
    }

    /// Reads a cache entry; returns `None` when absent or when its checksum does not match.
    pub fn read_cache(&self, label: &str, n_max: usize) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.cache_path(label, n_max)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        let obj = v.as_object()?;
        let record = record_from_value(obj.get("record")?).ok()?;
        if obj.get("sha256")?.as_str()? != record.checksum() {
            return None;
        }
        if record.label != label || record.n_max() != n_max {
            return None;
        }
        Some(CacheEntry {
            source_url: obj.get("source_url")?.as_str()?.to_string(),
            retrieved_at_unix: obj.get("retrieved_at_unix")?.to_string().parse().ok()?,
            record,
            provenance: Provenance::Cache,
        })
    }

    fn write_cache(&self, entry: &CacheEntry) -> Result<(), IngestError> {
        let body = format!(
            "{{\"record\": {}, \"retrieved_at_unix\": {}, \"sha256\": \"{}\", \"source_url\": {}}}\n",
            entry.record.to_canonical_json().trim_end(),
            entry.retrieved_at_unix,
            entry.record.checksum(),
            Value::String(entry.source_url.clone())
        );
        atomic_write(&self.cache_path(&entry.record.label, entry.record.n_max()), body.as_bytes())
    }

    fn get_with_retry(&self, url: &str) -> Result<String, IngestError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut last = String::new();
        for attempt in 0..self.attempts {
            if attempt > 0 {
                std::thread::sleep(self.backoff * 2u32.pow(attempt - 1));
            }
            match agent.get(url).call() {
                Ok(mut resp) => match resp.body_mut().read_to_string() {
                    Ok(s) => return Ok(s),
                    Err(e) => last = e.to_string(),
                },
                Err(ureq::Error::StatusCode(404)) => return Err(IngestError::NotFound(url.to_string())),
                Err(e) => last = e.to_string(),
            }
        }
        Err(IngestError::Network { attempts: self.attempts, message: last })
    }

    /// Fetches `a(1..=n_max)` for `label`, serving from cache when a valid entry exists.
    pub fn fetch_newform(&self, label: &str, n_max: usize) -> Result<CacheEntry, IngestError> {
        if let Some(e) = self.read_cache(label, n_max) {
            return Ok(e);
        }
        let url = self.url_for(label, n_max);
        let body = self.get_with_retry(&url)?;
        let v = parse_json(&body)?;
        let payload = match v.get("data") {
            Some(Value::Array(items)) => {
                let item = items
                    .iter()
                    .find(|it| it.get("label").and_then(Value::as_str) == Some(label))
                    .ok_or_else(|| IngestError::NotFound(label.to_string()))?;
                item.clone()
            }
            Some(_) => return Err(schema("/data", "expected an array")),
            None => v,
        };
        let mut record = record_from_value(&payload)?;
        if record.label != label {
            return Err(IngestError::NotFound(label.to_string()));
        }
        if record.an.len() < n_max {
            return Err(IngestError::Integrity(format!(
                "server returned {} coefficients, {} requested",
                record.an.len(),
                n_max
            )));
        }
        record.an.truncate(n_max);
        record.to_newform()?;
        let entry = CacheEntry {
            record,
            source_url: url,
            retrieved_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            provenance: Provenance::Network,
        };
        self.write_cache(&entry)?;
        Ok(entry)
    }
}

/// Integer entry helper for building records in code.
pub fn int_entry(a: i64) -> CoeffEntry {
    [BigInt::from(a), BigInt::one(), BigInt::zero(), BigInt::one()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FormRecord {
        FormRecord {
            label: "1.12.a.a".into(),
            level: 1,
            weight: 12,
            chi: CharSpec { modulus: 1, values: vec![(0, int_entry(1))] },
            field_disc: 0,
            an: [1, -24, 252, -1472, 4830, -6048, -16744, 84480].iter().map(|&a| int_entry(a)).collect(),
        }
    }

    #[test]
    fn canonical_round_trip() {
        let r = sample();
        let text = r.to_canonical_json();
        let back = parse_record(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_canonical_json(), text);
        let f = back.to_newform().unwrap();
        assert_eq!(f.a(2), &AlgNum::from_int(-24));
    }

    #[test]
    fn integrity_failures() {
        let mut r = sample();
        r.an[0] = int_entry(2);
        assert!(matches!(r.to_newform(), Err(IngestError::Integrity(_))));
        let mut r = sample();
        r.an.clear();
        assert_eq!(r.to_newform().unwrap().n_max(), 0);
    }

    #[test]
    fn schema_pointer_diagnostics() {
        let text = r#"{"label":"x","level":1,"weight":12,"char":{"modulus":1,"values":[[0,[1,1,0,1]]]},"field_disc":0,"an":[[1,1,0,1],[1,0,0,1]]}"#;
        match parse_record(text) {
            Err(IngestError::Schema { pointer, .. }) => assert_eq!(pointer, "/an/1/1"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_record("{\"label\": \"x\", \"an\": [1, 2") {
            Err(IngestError::Format { offset, .. }) => assert!(offset > 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"label":"x","level":1,"weight":12,"char":{"modulus":1,"values":[[0,[1,1,0,1]]]},"field_disc":0,"an":[[1,1,0,1],[123456789012345678901234567890,1,0,1]]}"#;
        let r = parse_record(text).unwrap();
        assert_eq!(r.an[1][0].to_string(), "123456789012345678901234567890");
    }
}
