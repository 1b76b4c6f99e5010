//! End-to-end tests of the `klsum` binary: flag parsing, artifact
//! shapes, config precedence, exit codes, and cache determinism.
//!
//! Each test launches the compiled binary via `CARGO_BIN_EXE_klsum`.
//! `KLSUM_CACHE_DIR` is always cleared so a developer's environment
//! cannot leak into the assertions.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn klsum(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_klsum"));
    cmd.env_remove("KLSUM_CACHE_DIR");
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    klsum(args).output().expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout is one JSON record")
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for sub in ["sum", "partial", "window", "tail", "exact", "phi", "verify"] {
        assert!(text.contains(sub), "--help is missing {sub}");
    }
}

#[test]
fn sum_record_matches_the_library() {
    let out = run(&[
        "sum",
        "--multiplier",
        "trivial",
        "--m",
        "1",
        "--n",
        "1",
        "--c",
        "7",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let record = json_of(&out);

    let expected = klsum::kloosterman::kloosterman_sum(&klsum::kloosterman::KloostermanQuery {
        m: 1,
        n: 1,
        nu: klsum::multiplier::MultiplierSpec::trivial(),
        c: 7,
    })
    .unwrap();
    assert_eq!(record["value"]["re"].as_f64().unwrap(), expected.value.re);
    assert_eq!(record["value"]["im"].as_f64().unwrap(), expected.value.im);
    assert_eq!(record["term_count"].as_u64().unwrap(), expected.term_count);
    assert_eq!(record["config"]["command"], "sum");
    assert_eq!(record["config"]["c"], 7);
}

#[test]
fn partial_emits_csv_with_header_and_ascending_moduli() {
    let out = run(&[
        "partial",
        "--multiplier",
        "trivial",
        "--m",
        "1",
        "--n",
        "2",
        "--xmax",
        "50",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,s_re,s_im,run_re,run_im");
    assert_eq!(lines.len(), 1 + 50);
    let moduli: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(moduli, (1..=50).collect::<Vec<u64>>());
    // Provenance echo on stderr is one JSON line with the effective config.
    let echo: Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(echo["command"], "partial");
    assert_eq!(echo["x_max"], 50);
}

#[test]
fn partial_with_no_admissible_moduli_is_header_only() {
    let out = run(&[
        "partial",
        "--multiplier",
        "eta",
        "--level",
        "3",
        "--m",
        "0",
        "--n",
        "1",
        "--xmax",
        "2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "c,s_re,s_im,run_re,run_im\n");
}

#[test]
fn exact_lands_on_the_known_first_coefficient() {
    let out = run(&["exact", "--n", "1", "--cutoff", "1000"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let record = json_of(&out);
    assert_eq!(record["nearest_int"], 1);
    assert!(record["distance"].as_f64().unwrap() < 0.05);
    assert_eq!(record["config"]["x_max"], 1000);
}

#[test]
fn window_and_tail_emit_records() {
    let out = run(&[
        "window",
        "--multiplier",
        "trivial",
        "--m",
        "1",
        "--n",
        "1",
        "--y",
        "10",
        "--x",
        "100",
    ]);
    assert!(out.status.success());
    let record = json_of(&out);
    assert!(record["total"].as_f64().unwrap() > 0.0);
    assert_eq!(record["window_terms"].as_u64().unwrap(), 91);

    let out = run(&[
        "tail",
        "--multiplier",
        "eta",
        "--level",
        "3",
        "--twist",
        "3",
        "--conjugate",
        "--m",
        "0",
        "--n",
        "5",
        "--alpha",
        "1.0",
        "--kind",
        "J",
        "--beta",
        "1/2",
        "--cmax",
        "2000",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let record = json_of(&out);
    assert!(record["terms"].as_u64().unwrap() > 0);
    assert!(record["value"]["re"].as_f64().is_some());
}

#[test]
fn phi_quarter_record_has_value_and_error_bound() {
    let out = run(&[
        "phi",
        "--x",
        "1000",
        "--transform",
        "quarter",
        "--weight",
        "1/2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let record = json_of(&out);
    assert!(record["value"]["re"].as_f64().unwrap().abs() > 0.0);
    assert!(record["error_bound"].as_f64().unwrap() < 1e-6);
    assert_eq!(record["config"]["profile"], "smooth");
}

#[test]
fn flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.json");
    let document = serde_json::json!({
        "command": "sum",
        "multiplier": "trivial",
        "m": 1,
        "n": 1,
        "c": 7
    });
    std::fs::write(&cfg_path, document.to_string()).unwrap();

    let out = run(&[
        "sum",
        "--config",
        cfg_path.to_str().unwrap(),
        "--n",
        "3",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let record = json_of(&out);
    // Flag wins over the file; untouched fields keep the file's values.
    assert_eq!(record["config"]["n"], 3);
    assert_eq!(record["config"]["m"], 1);
    assert_eq!(record["config"]["c"], 7);
}

#[test]
fn config_file_with_unknown_field_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.json");
    std::fs::write(&cfg_path, r#"{"command": "sum", "modulus": 7}"#).unwrap();
    let out = run(&["sum", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let record: Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "invalid-config");
}

#[test]
fn missing_required_value_is_exit_2() {
    let out = run(&["sum", "--multiplier", "trivial"]);
    assert_eq!(out.status.code(), Some(2));
    let record: Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "invalid-config");
    assert!(record["error"]["message"]
        .as_str()
        .unwrap()
        .contains("--c"));
}

#[test]
fn numeric_regime_violation_is_exit_3() {
    // Support stretched past the trusted series range of the Bessel
    // layer, at an order with no closed form.
    let out = run(&[
        "phi",
        "--a",
        "400",
        "--x",
        "10",
        "--transform",
        "tilde",
        "--r",
        "2.2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let record: Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "numeric-regime");
}

#[test]
fn corrupt_cache_is_exit_4_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cache_path = dir.path().join("sums.cache.csv");
    std::fs::write(&cache_path, "eta,0,1,3,1.0,0.0,2\nnot a record\n").unwrap();
    let out = run(&[
        "exact",
        "--n",
        "1",
        "--cutoff",
        "100",
        "--cache",
        cache_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let record: Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"]["kind"], "cache-corrupt");
    assert_eq!(record["error"]["line"], 2);
}

#[test]
fn warm_cache_rerun_is_byte_identical_and_writes_meta_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("sums.cache.csv");
    let out1 = dir.path().join("cold.csv");
    let out2 = dir.path().join("warm.csv");
    let base_args = [
        "partial",
        "--multiplier",
        "eta",
        "--level",
        "3",
        "--twist",
        "3",
        "--conjugate",
        "--m",
        "0",
        "--n",
        "1",
        "--xmax",
        "300",
        "--cache",
    ];

    let cold = klsum(&base_args)
        .arg(&cache)
        .arg("--output")
        .arg(&out1)
        .output()
        .unwrap();
    assert!(cold.status.success(), "stderr: {}", stderr_of(&cold));
    assert!(cache.exists(), "sweep populated the cache");

    let warm = klsum(&base_args)
        .arg(&cache)
        .arg("--output")
        .arg(&out2)
        .output()
        .unwrap();
    assert!(warm.status.success());

    let cold_bytes = std::fs::read(&out1).unwrap();
    let warm_bytes = std::fs::read(&out2).unwrap();
    assert!(!cold_bytes.is_empty());
    assert_eq!(cold_bytes, warm_bytes, "warm rerun must be byte-identical");

    // Every CSV file artifact gets a .meta.json sidecar with the config.
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(meta_path(&out1)).unwrap()).unwrap();
    assert_eq!(meta["command"], "partial");
    assert_eq!(meta["x_max"], 300);
    assert_eq!(meta["twist"], 3);
}

fn meta_path(csv: &Path) -> std::path::PathBuf {
    csv.with_extension("meta.json")
}

#[test]
fn cache_dir_environment_variable_sets_the_default_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = klsum(&["exact", "--n", "1", "--cutoff", "200"])
        .env("KLSUM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(
        dir.path().join("sums.cache.csv").exists(),
        "default cache file appears under KLSUM_CACHE_DIR"
    );
}

#[test]
fn dyadic_and_grid_sampling_conflict() {
    let out = run(&[
        "partial",
        "--multiplier",
        "trivial",
        "--xmax",
        "100",
        "--dyadic",
        "--grid",
        "10",
    ]);
    // clap rejects conflicting flags with usage exit status 2.
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dyadic_sampling_keeps_only_dyadic_cuts() {
    let out = run(&[
        "partial",
        "--multiplier",
        "trivial",
        "--m",
        "1",
        "--n",
        "1",
        "--xmax",
        "64",
        "--dyadic",
    ]);
    assert!(out.status.success());
    let moduli: Vec<u64> = stdout_of(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(moduli, vec![1, 2, 4, 8, 16, 32, 64]);
}

#[test]
#[ignore = "runs the full multi-minute verification suite"]
fn verify_subcommand_prints_a_pass_line_per_check() {
    let out = run(&["verify"]);
    let text = stdout_of(&out);
    for id in 1..=8 {
        assert!(text.contains(&format!("criterion {id} (")));
    }
    assert!(out.status.success(), "verification failed:\n{text}");
}
