//! End-to-end subcommand tests: exit codes, schema-tagged output, byte
//! determinism, and the seed override.

use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

static DIR_TAG: AtomicUsize = AtomicUsize::new(0);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_corecompact"))
}

/// Fresh scratch directory holding JSON fixture files for one test.
struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new() -> Fixtures {
        let dir = std::env::temp_dir().join(format!(
            "corecompact-cli-{}-{}",
            std::process::id(),
            DIR_TAG.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn file(&self, name: &str, value: Value) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, value.to_string()).unwrap();
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn line_space(dim: usize) -> Value {
    json!({ "kind": "euclidean_full", "dim": dim })
}

fn interval(lo: &str, hi: &str, lo_open: bool, hi_open: bool) -> Value {
    json!({ "lo": lo, "hi": hi, "lo_open": lo_open, "hi_open": hi_open })
}

fn open_interval_union(lo: &str, hi: &str) -> Value {
    json!({ "dim": 1, "boxes": [[interval(lo, hi, true, true)]] })
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "waybelow",
        "interpolate",
        "chain",
        "check-open",
        "counterexample",
        "properties",
    ] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{sub} --help");
    }
}

#[test]
fn waybelow_holds_with_certificate() {
    let fx = Fixtures::new();
    let space = fx.file("space.json", line_space(1));
    let s = fx.file(
        "s.json",
        json!({ "dim": 1, "boxes": [[interval("1/4", "3/4", false, false)]] }),
    );
    let t = fx.file("t.json", open_interval_union("0/1", "1/1"));
    let out = bin()
        .args(["waybelow", "--space", &space, "--s", &s, "--t", &t])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "waybelow/1");
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["certificate"]["kind"], "compact_core");
}

#[test]
fn waybelow_shared_endpoint_is_refuted() {
    let fx = Fixtures::new();
    let space = fx.file("space.json", line_space(1));
    let s = fx.file("s.json", open_interval_union("0/1", "1/1"));
    let t = fx.file("t.json", open_interval_union("0/1", "2/1"));
    let out = bin()
        .args(["waybelow", "--space", &space, "--s", &s, "--t", &t])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["holds"], false);
    assert_eq!(doc["refutation"]["kind"], "finite");
}

#[test]
fn waybelow_oracle_flag_appends_the_oracle_report() {
    let fx = Fixtures::new();
    let space = fx.file("space.json", line_space(1));
    let s = fx.file("s.json", open_interval_union("0/1", "1/1"));
    let t = fx.file("t.json", open_interval_union("0/1", "2/1"));
    let out = bin()
        .args([
            "waybelow",
            "--space",
            &space,
            "--s",
            &s,
            "--t",
            &t,
            "--oracle-budget",
            "50",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["oracle"]["conclusive"], true);
    assert_eq!(doc["oracle"]["verdict"], false);
}

#[test]
fn waybelow_bad_input_is_a_domain_error() {
    let fx = Fixtures::new();
    let space = fx.file("space.json", line_space(1));
    let s = fx.file("s.json", json!({ "this": "is not a box union" }));
    let t = fx.file("t.json", open_interval_union("0/1", "1/1"));
    let out = bin()
        .args(["waybelow", "--space", &space, "--s", &s, "--t", &t])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn interpolate_unit_square() {
    let fx = Fixtures::new();
    let x = fx.file("x.json", line_space(1));
    let y = fx.file("y.json", line_space(1));
    let s = fx.file("s.json", open_interval_union("0/1", "1/1"));
    let t = fx.file("t.json", open_interval_union("0/1", "1/1"));
    let w = fx.file(
        "w.json",
        json!({ "dim": 2, "boxes": [[
            interval("-1/1", "2/1", true, true),
            interval("-1/1", "2/1", true, true)
        ]] }),
    );
    let out = bin()
        .args([
            "interpolate",
            "--x-space",
            &x,
            "--y-space",
            &y,
            "--s",
            &s,
            "--t",
            &t,
            "--w",
            &w,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "interpolate/1");
    assert_eq!(doc["u_s"]["boxes"][0][0]["lo"], "-1/2");
    assert_eq!(doc["u_s"]["boxes"][0][0]["hi"], "3/2");
}

#[test]
fn interpolate_precondition_failure_exits_three() {
    let fx = Fixtures::new();
    let x = fx.file("x.json", line_space(1));
    let y = fx.file("y.json", line_space(1));
    let s = fx.file("s.json", open_interval_union("0/1", "1/1"));
    let t = fx.file("t.json", open_interval_union("0/1", "1/1"));
    // w equals s x t, so the closure of s x t escapes w
    let w = fx.file(
        "w.json",
        json!({ "dim": 2, "boxes": [[
            interval("0/1", "1/1", true, true),
            interval("0/1", "1/1", true, true)
        ]] }),
    );
    let out = bin()
        .args([
            "interpolate",
            "--x-space",
            &x,
            "--y-space",
            &y,
            "--s",
            &s,
            "--t",
            &t,
            "--w",
            &w,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["holds"], false);
    assert!(doc["refutation"].is_object());
}

fn growing_line_json(max_depth: u64) -> Value {
    json!({
        "rule": {
            "kind": "growing_box",
            "axes": [{
                "lo": { "base": "-1/1", "slope": "-1/1" },
                "hi": { "base": "1/1", "slope": "1/1" }
            }]
        },
        "max_depth": max_depth
    })
}

#[test]
fn chain_emits_a_full_witness() {
    let fx = Fixtures::new();
    let seq = fx.file("seq.json", growing_line_json(12));
    let w = fx.file("w.json", json!({ "rule": { "kind": "staircase" } }));
    let point = fx.file(
        "point.json",
        json!({ "x": { "coords": ["0/1"] }, "y": { "coords": ["0/1"] } }),
    );
    let out = bin()
        .args([
            "chain", "--seq-x", &seq, "--seq-y", &seq, "--w", &w, "--point", &point, "--depth",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "chain/1");
    assert_eq!(doc["u_chain"].as_array().unwrap().len(), 5);
    assert_eq!(doc["evidence"][0]["verdict"]["holds"], true);
}

#[test]
fn chain_point_outside_base_is_a_domain_error() {
    let fx = Fixtures::new();
    let seq = fx.file("seq.json", growing_line_json(12));
    let w = fx.file("w.json", json!({ "rule": { "kind": "staircase" } }));
    let point = fx.file(
        "point.json",
        json!({ "x": { "coords": ["0/1"] }, "y": { "coords": ["5/1"] } }),
    );
    let out = bin()
        .args([
            "chain", "--seq-x", &seq, "--seq-y", &seq, "--w", &w, "--point", &point, "--depth",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_open_accepts_the_symmetric_family() {
    let fx = Fixtures::new();
    let seq = fx.file("seq.json", growing_line_json(12));
    let family = fx.file(
        "family.json",
        json!({
            "rule": {
                "kind": "affine_box",
                "axes": [{
                    "lo": { "base": "0/1", "slope": "-1/1" },
                    "hi": { "base": "0/1", "slope": "1/1" }
                }],
                "lo_closed": [false],
                "hi_closed": [false]
            }
        }),
    );
    let out = bin()
        .args(["check-open", "--seq", &seq, "--family", &family, "--upto", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "check-open/1");
    assert_eq!(doc["open"], true);
}

#[test]
fn check_open_rejects_the_half_closed_family() {
    let fx = Fixtures::new();
    let seq = fx.file("seq.json", json!({ "rule": { "kind": "fixed", "space": line_space(1) }, "max_depth": 12 }));
    let family = fx.file(
        "family.json",
        json!({
            "rule": {
                "kind": "affine_box",
                "axes": [{
                    "lo": { "base": "0/1", "slope": "0/1" },
                    "hi": { "base": "0/1", "slope": "1/1" }
                }],
                "lo_closed": [true],
                "hi_closed": [false]
            }
        }),
    );
    let out = bin()
        .args(["check-open", "--seq", &seq, "--family", &family, "--upto", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["open"], false);
}

#[test]
fn hamcke_report_shape_and_kmax_zero() {
    let out = bin()
        .args(["counterexample", "hamcke", "--kmax", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "hamcke/1");
    assert_eq!(doc["index_shift"], 1);
    assert_eq!(doc["separations"].as_array().unwrap().len(), 2);
    assert_eq!(doc["limit_witnesses"].as_array().unwrap().len(), 2);

    let out = bin()
        .args(["counterexample", "hamcke", "--kmax", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn properties_small_run_passes() {
    let out = bin()
        .args(["properties", "--cases", "4", "--depth", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "properties/1");
    assert_eq!(doc["all_passed"], true);
    assert_eq!(doc["laws"].as_array().unwrap().len(), 15);
    // per-law progress goes to stderr, not stdout
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass"));
}

#[test]
fn properties_law_filter() {
    let out = bin()
        .args([
            "properties",
            "--cases",
            "4",
            "--law",
            "waybelow.right_monotone",
            "--law",
            "waybelow.basis",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["laws"].as_array().unwrap().len(), 2);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let fx = Fixtures::new();
    let space = fx.file("space.json", line_space(1));
    let s = fx.file("s.json", open_interval_union("0/1", "1/1"));
    let t = fx.file("t.json", open_interval_union("0/1", "2/1"));
    let run = || {
        bin()
            .args(["waybelow", "--space", &space, "--s", &s, "--t", &t])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());

    let props = || {
        bin()
            .args(["properties", "--cases", "3", "--depth", "2", "--seed", "11"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(props(), props());
}

#[test]
fn seed_env_overrides_the_flag() {
    let out = bin()
        .args(["properties", "--cases", "2", "--depth", "2", "--seed", "3"])
        .env("WAYBELOW_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["seed"], 9);

    let out = bin()
        .args(["properties", "--cases", "2"])
        .env("WAYBELOW_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}
