use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn rscong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rscong")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn coset_reduce_echoes_class_and_witness() {
    let out = rscong(&["coset-reduce", "--p", "5", "--level-pair", "1,2", "--entries", "1,5,25,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["j"], 1);
    assert_eq!(v["result"]["minor_classifier_j"], 1);
    assert_eq!(v["result"]["witness_verified"], true);
    assert_eq!(v["result"]["representative"][3][1], "5");
}

#[test]
fn coset_reduce_precondition_exits_one() {
    let out = rscong(&["coset-reduce", "--p", "5", "--level-pair", "1,2", "--entries", "1,5,1,5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("v_p(z) = 0"));
}

#[test]
fn local_constant_matches_local_l_ratio() {
    let out = rscong(&[
        "local-constant", "--p", "3", "--steinberg", "2-sqrt(-26)", "--ps-trace", "1/2*sqrt(-26)", "--ps-det", "-5/3",
        "--weights", "12,20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["agree"], true);
    assert_eq!(v["result"]["c_p"]["d0"], -26);
    assert_eq!(v["result"]["orientation"], "SteinbergAtN");
}

#[test]
fn local_constant_degenerate_and_mirrored() {
    let out = rscong(&["local-constant", "--p", "7", "--steinberg", "0", "--ps-trace", "3", "--ps-det", "5", "--weights", "4,8", "--mirrored"]);
    let v = json(&out);
    assert_eq!(v["result"]["c_p"]["text"], "1");
    assert_eq!(v["result"]["orientation"], "MirroredExtrapolation");
}

#[test]
fn bad_number_and_missing_fixture_exit_one() {
    let out = rscong(&["local-constant", "--p", "7", "--steinberg", "x", "--ps-trace", "3", "--ps-det", "5", "--weights", "4,8"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rscong(&["congruent", "--form1", "3.13.b.a", "--form2", "no.such.form", "--prime", "13"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not found"));
}

#[test]
fn congruent_pair_at_thirteen() {
    let out = rscong(&["congruent", "--form1", "3.13.b.a", "--form2", "3.13.b.b", "--prime", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["congruent"], true);
    assert_eq!(v["result"]["eisenstein_alarm"], "E13[3]");
}

#[test]
fn lvalue_uses_direct_sum_where_convergent() {
    let out = rscong(&["--precision", "12", "--n-max", "2000", "lvalue", "--fixed", "delta:26", "--form", "3.13.b.a", "--s", "25"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["method"], "direct");
    for key in ["value_re", "value_im", "err_bound"] {
        assert!(v["result"][key].is_string(), "{key}");
    }
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, format!("{{\"json_out\": {:?}, \"precision\": 20}}", out_path.to_str().unwrap())).unwrap();
    let out = rscong(&["--config", cfg.to_str().unwrap(), "coset-reduce", "--p", "3", "--level-pair", "0,1", "--entries", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["result"]["j"], 1);

    std::fs::write(&cfg, "{\"precison\": 20}").unwrap();
    let out = rscong(&["--config", cfg.to_str().unwrap(), "coset-reduce", "--p", "3", "--level-pair", "0,1", "--entries", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

fn verify_into(dir: &Path) -> Output {
    rscong(&[
        "--precision", "60", "--n-max", "3000", "verify", "--fixed", "delta:26", "--pair", "3.13.b.a,3.13.b.a", "--prime", "13",
        "--height-cap-digits", "30",
        "--m-list", "23,24", "--out-dir", dir.to_str().unwrap(),
    ])
}

#[test]
fn verify_identical_forms_is_deterministic_and_congruent() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (oa, ob) = (verify_into(a.path()), verify_into(b.path()));
    assert_eq!(oa.status.code(), Some(0), "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(ob.status.code(), Some(0));
    let ra = std::fs::read(a.path().join("report.json")).unwrap();
    let rb = std::fs::read(b.path().join("report.json")).unwrap();
    assert_eq!(ra, rb);
    let v: Value = serde_json::from_slice(&ra).unwrap();
    let verdicts = v["result"]["verdicts"].as_array().unwrap();
    assert!(!verdicts.is_empty());
    for pv in verdicts {
        assert_eq!(pv["comparison"]["verdict"], "Congruent", "{pv}");
    }
    assert!(v["result"]["hypotheses"].is_object());
    assert!(v["result"]["excluded_primes"].is_object());
    let m: Value = serde_json::from_slice(&std::fs::read(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["fixture_checksums"].as_object().unwrap().len(), 2);
    assert!(std::fs::read_to_string(a.path().join("report.txt")).unwrap().contains("exit code 0"));
}
