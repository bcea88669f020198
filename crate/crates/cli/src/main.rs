//! `rscong`: fetch forms, check coefficient congruences, evaluate Rankin-Selberg
//! L-values, verify ratio congruences, reduce double cosets and evaluate local constants.

mod algparse;
mod config;
mod forms;
mod manifest;

use algparse::{parse_alg, parse_rat, triple};
use clap::{Parser, Subcommand};
use config::{GlobalArgs, Settings};
use manifest::RunManifest;
use rscong::congruence::{check_congruent, eisenstein_screen};
use rscong::coset::{double_coset_index, levi_projection_level, reduce_unipotent, Mat4, PadicMat};
use rscong::ingest::{Fetcher, Provenance, DEFAULT_BASE_URL};
use rscong::localint::{l_ratio, local_constant, local_constant_mirrored, local_euler_factor, LocalRep};
use rscong::lvalue::l_at;
use rscong::rankin::{order_by_weight, rs_coefficients};
use rscong::ratio::{choose_prime, full_report, ReportOptions};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

/// Version tag embedded in every output document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Engine(String),
}

fn engine<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Engine(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "rscong", version, about = "Congruences between ratios of critical Rankin-Selberg L-values")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download `a(1..=n_max)` of a newform into the cache.
    Fetch {
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value = DEFAULT_BASE_URL)]
        base_url: String,
    },
    /// Check a coefficient congruence modulo a prime above `l`.
    Congruent {
        #[arg(long)]
        form1: String,
        #[arg(long)]
        form2: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 50)]
        n_extra: usize,
    },
    /// Completed Rankin-Selberg L-value at an integer.
    Lvalue {
        #[arg(long)]
        fixed: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        s: i64,
    },
    /// Full ratio-congruence report for a fixed form and a congruent pair.
    Verify {
        #[arg(long)]
        fixed: String,
        /// Two form references separated by a comma.
        #[arg(long, value_delimiter = ',', required = true)]
        pair: Vec<String>,
        #[arg(long)]
        prime: u64,
        /// Restrict to pairs (m, m+1) with m in this list.
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<i64>>,
        /// Reconstruction height cap as a power of ten; the precision must be at least (field degree + 1) times this.
        #[arg(long, default_value_t = 40)]
        height_cap_digits: u32,
        /// Directory for report.json, report.txt and manifest.json.
        #[arg(long, default_value = "rscong-report")]
        out_dir: PathBuf,
    },
    /// Reduce a lower block unipotent matrix to a double-coset representative.
    CosetReduce {
        #[arg(long)]
        p: u64,
        /// Conductor exponents n', n.
        #[arg(long, value_delimiter = ',', required = true)]
        level_pair: Vec<u32>,
        /// Lower-left block entries x, y, z, w.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Exact local constant of the intertwining operator.
    LocalConstant {
        #[arg(long)]
        p: u64,
        /// `a(p, h)` of the Steinberg side.
        #[arg(long, allow_hyphen_values = true)]
        steinberg: String,
        /// `a(p, h'^rho)`; the factor `p^{-1/2}` is implied.
        #[arg(long, allow_hyphen_values = true)]
        ps_trace: String,
        /// `chi'_1(p) chi'_2(p)`.
        #[arg(long, allow_hyphen_values = true)]
        ps_det: String,
        /// Weights k, k'.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        /// Steinberg component on the `N'` side (extrapolated).
        #[arg(long)]
        mirrored: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fetch { .. } => "fetch",
            Command::Congruent { .. } => "congruent",
            Command::Lvalue { .. } => "lvalue",
            Command::Verify { .. } => "verify",
            Command::CosetReduce { .. } => "coset-reduce",
            Command::LocalConstant { .. } => "local-constant",
        }
    }
}

/// Result document plus exit code.
struct Outcome {
    result: Value,
    code: u8,
}

fn document(command: &str, result: Value) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "command": command, "result": result })
}

fn emit(settings: &Settings, doc: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match &settings.json_out {
        Some(path) => rscong::ingest::atomic_write(path, text.as_bytes()).map_err(engine),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(x)?)
}

fn expect_len<T>(name: &str, v: &[T], n: usize) -> Result<(), CliError> {
    if v.len() != n {
        return Err(CliError::Usage(format!("--{name} takes {n} comma-separated values, got {}", v.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let settings = Settings::resolve(&cli.global)?;
    let name = cli.command.name();
    let mut manifest = RunManifest::start(name, &settings);
    let outcome = match cli.command {
        Command::Fetch { label, n_max, base_url } => {
            manifest.arg("label", &label).arg("n_max", n_max).arg("base_url", &base_url);
            let fetcher = Fetcher::new(base_url, settings.cache_dir.clone());
            let entry = fetcher.fetch_newform(&label, n_max).map_err(engine)?;
            manifest.fixture(&label, &entry.record.checksum());
            Outcome {
                result: json!({
                    "label": entry.record.label,
                    "level": entry.record.level,
                    "weight": entry.record.weight,
                    "n_max": entry.record.n_max(),
                    "sha256": entry.record.checksum(),
                    "source_url": entry.source_url,
                    "from_cache": entry.provenance == Provenance::Cache,
                    "cache_path": fetcher.cache_path(&label, n_max),
                }),
                code: 0,
            }
        }
        Command::Congruent { form1, form2, prime, n_extra } => {
            manifest.arg("form1", &form1).arg("form2", &form2).arg("prime", prime).arg("n_extra", n_extra);
            let h1 = forms::resolve(&form1, &settings, &mut manifest)?;
            let h2 = forms::resolve(&form2, &settings, &mut manifest)?;
            let field = h1.field.join(&h2.field).map_err(engine)?;
            let p = choose_prime(prime, field, &h1, &h2, n_extra).map_err(engine)?;
            let mut report = check_congruent(&h1, &h2, &p, n_extra).map_err(engine)?;
            report.eisenstein_alarm = eisenstein_screen(&h1, &p).or_else(|| eisenstein_screen(&h2, &p));
            let code = if report.congruent { 0 } else { 2 };
            Outcome { result: to_value(&report)?, code }
        }
        Command::Lvalue { fixed, form, s } => {
            manifest.arg("fixed", &fixed).arg("form", &form).arg("s", s);
            let h = forms::resolve(&fixed, &settings, &mut manifest)?;
            let h2 = forms::resolve(&form, &settings, &mut manifest)?;
            let (lo, hi) = order_by_weight(&h, &h2).map_err(engine)?;
            let n = lo.n_max().min(hi.n_max());
            let rs = rs_coefficients(lo, hi, n).map_err(engine)?;
            let v = l_at(&rs, s, settings.precision).map_err(engine)?;
            let digits = settings.precision.digits;
            Outcome {
                result: json!({
                    "series": format!("{} x {}", rs.h.label, rs.h2.label),
                    "s": s,
                    "value_re": v.value.re.to_decimal(digits),
                    "value_im": v.value.im.to_decimal(digits),
                    "err_bound": v.err_bound.to_decimal(30),
                    "method": v.method,
                }),
                code: 0,
            }
        }
        Command::Verify { fixed, pair, prime, m_list, height_cap_digits, out_dir } => {
            expect_len("pair", &pair, 2)?;
            manifest.arg("fixed", &fixed).arg("pair", pair.join(",")).arg("prime", prime).arg("height_cap_digits", height_cap_digits);
            if let Some(m) = &m_list {
                manifest.arg("m_list", format!("{m:?}"));
            }
            let h = forms::resolve(&fixed, &settings, &mut manifest)?;
            let h1 = forms::resolve(&pair[0], &settings, &mut manifest)?;
            let h2 = forms::resolve(&pair[1], &settings, &mut manifest)?;
            let opts = ReportOptions {
                precision: settings.precision,
                m_list,
                height_cap: num_bigint::BigInt::from(10).pow(height_cap_digits),
                ..ReportOptions::default()
            };
            let report = full_report(&h, &h1, &h2, prime, &opts).map_err(engine)?;
            let code = report.exit_code() as u8;
            std::fs::create_dir_all(&out_dir)?;
            let doc = document("verify", to_value(&report)?);
            rscong::ingest::atomic_write(&out_dir.join("report.json"), (serde_json::to_string_pretty(&doc)? + "\n").as_bytes())
                .map_err(engine)?;
            let summary = report.summary();
            rscong::ingest::atomic_write(&out_dir.join("report.txt"), summary.as_bytes()).map_err(engine)?;
            eprint!("{summary}");
            manifest.finish(&out_dir.join("manifest.json"))?;
            if let Some(path) = &settings.json_out {
                rscong::ingest::atomic_write(path, (serde_json::to_string_pretty(&doc)? + "\n").as_bytes()).map_err(engine)?;
            }
            return Ok(code);
        }
        Command::CosetReduce { p, level_pair, entries } => {
            expect_len("level-pair", &level_pair, 2)?;
            expect_len("entries", &entries, 4)?;
            manifest.arg("p", p).arg("level_pair", format!("{level_pair:?}")).arg("entries", entries.join(","));
            if !rscong::exactnum::is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let vals: Vec<_> = entries.iter().map(|e| parse_rat(e)).collect::<Result<_, _>>().map_err(CliError::Usage)?;
            let (n1, n2) = (level_pair[0], level_pair[1]);
            let u = PadicMat::new(p, Mat4::lower_unipotent(vals[0].clone(), vals[1].clone(), vals[2].clone(), vals[3].clone()));
            let class = reduce_unipotent(&u, n1, n2).map_err(engine)?;
            let level = n1 + n2;
            let independent = double_coset_index(&u, level).map_err(engine)?;
            let (left_level, right_level) = levi_projection_level(class.j, n1, n2).map_err(engine)?;
            Outcome {
                result: json!({
                    "p": p,
                    "level": level,
                    "j": class.j,
                    "representative": class.representative,
                    "left": class.left,
                    "right": class.right,
                    "steps": class.steps,
                    "witness_verified": class.verify(&u).is_ok(),
                    "minor_classifier_j": independent,
                    "levi_levels": [left_level.n, right_level.n],
                }),
                code: 0,
            }
        }
        Command::LocalConstant { p, steinberg, ps_trace, ps_det, weights, mirrored } => {
            expect_len("weights", &weights, 2)?;
            manifest
                .arg("p", p)
                .arg("steinberg", &steinberg)
                .arg("ps_trace", &ps_trace)
                .arg("ps_det", &ps_det)
                .arg("weights", format!("{weights:?}"))
                .arg("mirrored", mirrored);
            if !rscong::exactnum::is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let a = parse_alg(&steinberg).map_err(CliError::Usage)?;
            let t = parse_alg(&ps_trace).map_err(CliError::Usage)?;
            let d = parse_alg(&ps_det).map_err(CliError::Usage)?;
            let st = LocalRep::steinberg(p, a, 1).map_err(engine)?;
            let ps = LocalRep::unramified(p, t, d, 0).map_err(engine)?;
            let (k, k2) = (weights[0], weights[1]);
            let c = if mirrored { local_constant_mirrored(&st, &ps, k, k2) } else { local_constant(&st, &ps, k, k2) }
                .map_err(engine)?;
            let ratio = l_ratio(&local_euler_factor(&st, &ps).map_err(engine)?, k2).map_err(engine)?;
            Outcome {
                result: json!({
                    "p": p,
                    "weights": [k, k2],
                    "c_p": triple(&c.value),
                    "local_l_ratio": triple(&ratio),
                    "agree": c.value == ratio,
                    "orientation": c.orientation,
                }),
                code: 0,
            }
        }
    };
    emit(&settings, &document(name, outcome.result))?;
    if let Some(path) = &settings.manifest_out {
        manifest.finish(path)?;
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
