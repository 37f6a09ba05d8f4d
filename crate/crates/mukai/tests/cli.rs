use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn mukai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn exceptional_instance_via_check() {
    let out = mukai(&[
        "--quiet", "check", "--r", "2", "--s", "2", "--a", "9", "--b", "9", "--checks",
        "nu,line-bundle,dimension-match,exclusions",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let results = &r["instances"][0]["results"];
    assert_eq!(results["nu"]["data"]["nu"], -2);
    assert_eq!(results["line-bundle"]["data"]["l"], serde_json::json!({"basis": "sigma_f", "coeffs": [4, 8]}));
    assert_eq!(results["dimension-match"]["data"]["left"], 48620);
    assert_eq!(results["exclusions"]["data"]["exceptional_case"], true);
}

#[test]
fn divisibility_error_skips_dependents() {
    let out = mukai(&[
        "--quiet", "check", "--r", "2", "--s", "2", "--a", "3", "--b", "4", "--checks",
        "nu,line-bundle,exclusions",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let results = &r["instances"][0]["results"];
    assert_eq!(results["nu"]["status"], "error");
    assert_eq!(results["nu"]["data"]["kind"], "divisibility");
    for dep in ["line-bundle", "exclusions"] {
        assert_eq!(results[dep]["status"], "skipped");
        assert!(results[dep]["reason"].as_str().unwrap().starts_with("nu failed"));
    }
}

#[test]
fn parse_errors_exit_two() {
    let f = spec_file("[[instance]]\nsurface = { kind = \"elliptic-k3\" }\nchecks = [\"bogus\"]\n");
    let out = mukai(&["batch", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(mukai(&["check", "--checks", "nope"]).status.code(), Some(2));
    assert_eq!(mukai(&["batch", "/nonexistent/spec.toml"]).status.code(), Some(2));
}

#[test]
fn empty_batch_is_empty_report() {
    let f = spec_file("");
    let out = mukai(&["--quiet", "batch", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["instances"], serde_json::json!([]));
}

#[test]
fn expectations_turn_into_failures() {
    let f = spec_file(
        "[[instance]]\nsurface = { kind = \"elliptic-k3\" }\nparams = { r = 2, s = 2, a = 9, b = 9 }\n\
         checks = [\"nu\"]\nexpect = { \"nu.nu\" = -3 }\n",
    );
    let out = mukai(&["--quiet", "batch", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["instances"][0]["results"]["nu"]["status"], "fail");
}

#[test]
fn worker_count_keeps_order() {
    let f = spec_file(
        "[[instance]]\nsurface = { kind = \"elliptic-k3\" }\nparams = { r = [2, 4], s = [2, 3], a = 9, b = [9, 13] }\n\
         checks = [\"nu\"]\n",
    );
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mukai"))
            .env("MUKAI_WORKERS", workers)
            .args(["--quiet", "batch", f.path().to_str().unwrap()])
            .output()
            .unwrap();
        let mut v = report(&out);
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let one = run("1");
    assert_eq!(one["instances"].as_array().unwrap().len(), 30);
    assert_eq!(one["instances"][0]["spec"]["params"], serde_json::json!([2, 2, 9, 9]));
    assert_eq!(one, run("4"));
}

#[test]
fn report_round_trips() {
    let out = mukai(&["--quiet", "strata", "--v", "2;1,0;-2", "--wall", "1,-2", "--parts", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap(), text.trim_end());
    let wall = &v["instances"][0]["results"]["strata"]["data"]["walls"][0];
    assert_eq!(wall["m"], "4/1");
    assert_eq!(wall["strata"]["2"]["hn_above"], 3);
}

#[test]
fn fm_verify_and_sweep_subcommands() {
    let out = mukai(&["--quiet", "fm-verify", "--rmax", "3", "--amax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["instances"][0]["results"]["fm-verify"]["data"]["isometry_passed"], 16);
    let out = mukai(&["--quiet", "sweep", "--r", "2..2", "--s", "2..3", "--ab-max", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!report(&out)["instances"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = mukai(&[
        "--quiet", "--out", path.to_str().unwrap(), "check", "--surface", "generic-k3:14", "--checks", "theta",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["instances"][0]["results"]["theta"]["data"]["checked"], 576);
}
